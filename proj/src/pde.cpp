#include "bpv/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bpv/error.hpp"
#include "bpv/quadrature.hpp"
#include "bpv/specfun.hpp"

namespace bpv {
namespace {

struct Nonlinear {
  double N = 0.0;             // int h_+^p rho^{n-1}
  std::vector<double> g;      // int h_+^{p-1} phi_i rho^{n-1}
  Tridiag jac;                // (p-1) int h_+^{p-2} phi_i phi_j rho^{n-1}
};

// Same element layout as assemble_radial; 4-point Gauss per P1 element and the
// exact integral over the power-law first element.
Nonlinear nonlinear_terms(const RadialForms& f, const std::vector<double>& x, double p, bool with_jac) {
  const std::vector<double>& rho = f.rho;
  const size_t M = rho.size(), m = M - 1;
  const int n = f.n;
  Nonlinear out;
  out.g.assign(m, 0.0);
  if (with_jac) {
    out.jac.diag.assign(m, 0.0);
    out.jac.off.assign(m - 1, 0.0);
  }
  KahanSum total;
  const double r1 = rho[0], h1 = std::max(x[0], 0.0);
  const double denom = f.s * p + n;
  const double rn = std::pow(r1, n);
  total.add(std::pow(h1, p) * rn / denom);
  out.g[0] += std::pow(h1, p - 1) * rn / denom;
  if (with_jac && h1 > 0) out.jac.diag[0] += (p - 1) * std::pow(h1, p - 2) * rn / denom;

  const GaussRule& gr = gauss_legendre(4);
  for (size_t e = 0; e + 1 < M; ++e) {
    const double a = rho[e], b = rho[e + 1], len = b - a;
    const double ha = x[e], hb = e + 1 < m ? x[e + 1] : 0.0;
    if (ha <= 0 && hb <= 0) continue;
    double sN = 0, g0 = 0, g1 = 0, j00 = 0, j01 = 0, j11 = 0;
    for (size_t q = 0; q < gr.x.size(); ++q) {
      const double t = 0.5 * (1.0 + gr.x[q]);
      const double r = a + len * t;
      const double w = 0.5 * len * gr.w[q] * std::pow(r, n - 1);
      const double p0 = 1.0 - t, p1 = t;
      const double v = std::max(ha * p0 + hb * p1, 0.0);
      if (v == 0.0) continue;
      const double vp1 = std::pow(v, p - 1);
      sN += w * vp1 * v;
      g0 += w * vp1 * p0;
      g1 += w * vp1 * p1;
      if (with_jac) {
        const double d = (p - 1) * w * std::pow(v, p - 2);
        j00 += d * p0 * p0;
        j01 += d * p0 * p1;
        j11 += d * p1 * p1;
      }
    }
    total.add(sN);
    out.g[e] += g0;
    if (e + 1 < m) out.g[e + 1] += g1;
    if (with_jac) {
      out.jac.diag[e] += j00;
      if (e + 1 < m) {
        out.jac.diag[e + 1] += j11;
        out.jac.off[e] += j01;
      }
    }
  }
  out.N = total.value();
  return out;
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Thomas algorithm without pivoting; lo[i] couples row i+1 to column i,
// up[i] couples row i to column i+1.
bool thomas(const std::vector<double>& lo, const std::vector<double>& diag, const std::vector<double>& up,
            const std::vector<double>& b, std::vector<double>& x) {
  const size_t m = diag.size();
  std::vector<double> c(m, 0.0), d(m);
  double piv = diag[0];
  if (piv == 0.0 || !std::isfinite(piv)) return false;
  c[0] = m > 1 ? up[0] / piv : 0.0;
  d[0] = b[0] / piv;
  for (size_t i = 1; i < m; ++i) {
    piv = diag[i] - lo[i - 1] * c[i - 1];
    if (piv == 0.0 || !std::isfinite(piv)) return false;
    c[i] = i + 1 < m ? up[i] / piv : 0.0;
    d[i] = (b[i] - lo[i - 1] * d[i - 1]) / piv;
  }
  x.assign(m, 0.0);
  x[m - 1] = d[m - 1];
  for (size_t i = m - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return true;
}

// Three-point differences on a nonuniform mesh: h'' ~ a h[i-1] + b h[i] + c h[i+1], same for h'.
struct Stencil {
  double d2m, d2c, d2p, d1m, d1c, d1p;
};
Stencil stencil(const std::vector<double>& r, size_t i) {
  const double dm = r[i] - r[i - 1], dp = r[i + 1] - r[i];
  const double den = dm * dp * (dm + dp);
  return {2 * dp / den, -2 * (dm + dp) / den, 2 * dm / den, -dp * dp / den, (dp * dp - dm * dm) / den, dm * dm / den};
}

// Finite difference equations at nodes 1..M-2 with h[M-1] = 0. Node 0 is tied
// to node 1 through the expansion h ~ rho^s (1 + b rho^2) at the origin, where
// b = (lambda - h(0)^{p-2}) / (2(2s+n)); the nonlinear part of b is only kept in
// the regular case s = 0. Damped Newton from the finite element solution;
// returns false if the residual does not settle.
bool fd_polish(const PdeProblem& prob, const std::vector<double>& rho, double s_exp, std::vector<double>& h) {
  const size_t m = h.size();  // unknowns at rho[0..m-1], rho[m] is the boundary
  const int n = prob.n;
  const double c = hardy_coefficient(prob.alpha, n), lam = prob.lambda, p = prob.p;
  const double power = std::pow(rho[0] / rho[1], s_exp);
  const double r0 = rho[0] * rho[0], r1 = rho[1] * rho[1], den_b = 2.0 * (2.0 * s_exp + n);
  const bool regular = s_exp == 0.0;
  // Ratio h[0]/h[1] and its derivative in h[1].
  auto link = [&](double h1, double& dlink) {
    const double hp = std::max(h1, 0.0);
    const double b = (lam - (regular ? std::pow(hp, p - 2) : 0.0)) / den_b;
    const double db = regular && hp > 0 ? -(p - 2) * std::pow(hp, p - 3) / den_b : 0.0;
    const double q = 1.0 + b * r1;
    dlink = power * (r0 - r1) / (q * q) * db;
    return power * (1.0 + b * r0) / q;
  };
  auto value = [&](const std::vector<double>& v, size_t i) { return i < m ? v[i] : 0.0; };
  auto residual = [&](const std::vector<double>& v, std::vector<double>& F) {
    F.assign(m, 0.0);
    double dl;
    F[0] = v[0] - link(v[1], dl) * v[1];
    for (size_t i = 1; i < m; ++i) {
      const Stencil st = stencil(rho, i);
      const double hm = v[i - 1], hc = v[i], hp = value(v, i + 1);
      const double d2 = st.d2m * hm + st.d2c * hc + st.d2p * hp;
      const double d1 = st.d1m * hm + st.d1c * hc + st.d1p * hp;
      F[i] = -(d2 + (n - 1) / rho[i] * d1) - c * hc / (rho[i] * rho[i]) + lam * hc - std::pow(std::max(hc, 0.0), p - 1);
    }
  };
  std::vector<double> F, lo(m - 1), diag(m), up(m - 1), dh, trial;
  residual(h, F);
  double fnorm = sup_abs(F);
  for (int k = 0; k < 50; ++k) {
    double dl;
    const double l = link(h[1], dl);
    diag[0] = 1.0;
    up[0] = -(l + dl * h[1]);
    for (size_t i = 1; i < m; ++i) {
      const Stencil st = stencil(rho, i);
      const double w = (n - 1) / rho[i];
      lo[i - 1] = -(st.d2m + w * st.d1m);
      diag[i] = -(st.d2c + w * st.d1c) - c / (rho[i] * rho[i]) + lam -
                (p - 1) * std::pow(std::max(h[i], 0.0), p - 2);
      if (i + 1 < m) up[i] = -(st.d2p + w * st.d1p);
    }
    if (!thomas(lo, diag, up, F, dh)) return false;
    double tau = 1.0, fn = 0.0;
    for (int ls = 0; ls < 30; ++ls, tau *= 0.5) {
      trial = h;
      for (size_t i = 0; i < m; ++i) trial[i] -= tau * dh[i];
      residual(trial, F);
      fn = sup_abs(F);
      if (fn < fnorm || fn <= 1e-13 * sup_abs(trial)) break;
    }
    const double step = tau * sup_abs(dh);
    h = trial;
    fnorm = fn;
    if (!std::isfinite(fnorm)) return false;
    if (step <= 1e-12 * sup_abs(h)) return true;
  }
  return fnorm <= 1e-8 * sup_abs(h);
}

Tridiag combine(const Tridiag& a, double sa, const Tridiag& b, double sb) {
  Tridiag t = a;
  for (size_t i = 0; i < t.diag.size(); ++i) t.diag[i] = sa * a.diag[i] + sb * b.diag[i];
  for (size_t i = 0; i < t.off.size(); ++i) t.off[i] = sa * a.off[i] + sb * b.off[i];
  return t;
}

enum class Outcome { Converged, Collapsed, Failed };

struct Attempt {
  Outcome outcome = Outcome::Failed;
  std::vector<double> h;
};

Attempt run_attempt(const PdeProblem& prob, const RadialForms& f, const Tridiag& kl, const Tridiag& pre,
                    std::vector<double> v) {
  const double p = prob.p;
  const size_t m = v.size();
  auto quotient_parts = [&](const std::vector<double>& w, double& a, double& N) {
    a = kl.quad(w);
    N = nonlinear_terms(f, w, p, false).N;
  };
  // Push the start into {a > 0} with a narrow bump if needed.
  double a = 0, N = 0;
  quotient_parts(v, a, N);
  if (!(a > 0) || !(N > 0)) {
    std::vector<double> bump(m, 0.0);
    for (size_t i = 0; i < m; ++i) bump[i] = std::max(0.0, 1.0 - std::abs(f.rho[i] - 0.5) / 0.01);
    double beta = 0.1;
    for (int k = 0; k < 60 && !(a > 0 && N > 0); ++k, beta *= 2) {
      for (size_t i = 0; i < m; ++i) v[i] += beta * bump[i];
      quotient_parts(v, a, N);
    }
    if (!(a > 0 && N > 0)) return {};
  }
  {
    const double s = sup_abs(v);
    for (double& x : v) x /= s;
  }
  Attempt out;
  std::vector<double> kv, r;
  bool collapsed = false;
  for (int it = 0; it < 5000; ++it) {
    quotient_parts(v, a, N);
    const Nonlinear nl = nonlinear_terms(f, v, p, false);
    kl.apply(v, kv);
    r.assign(m, 0.0);
    for (size_t i = 0; i < m; ++i) r[i] = kv[i] - (a / N) * nl.g[i];
    const std::vector<double> d = pre.solve_spd(r);
    const double R0 = a / std::pow(N, 2.0 / p);
    double tau = 1.0;
    std::vector<double> w(m);
    bool accepted = false;
    for (int ls = 0; ls < 45; ++ls, tau *= 0.5) {
      for (size_t i = 0; i < m; ++i) w[i] = v[i] - tau * d[i];
      double a2, N2;
      quotient_parts(w, a2, N2);
      if (a2 > 0 && N2 > 0 && a2 / std::pow(N2, 2.0 / p) < R0) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    const double s = sup_abs(w);
    for (size_t i = 0; i < m; ++i) v[i] = w[i] / s;
    quotient_parts(v, a, N);
    const double t = std::pow(std::max(a, 0.0) / N, 1.0 / (p - 2));
    if (t < 1e-9) {
      collapsed = true;
      break;
    }
    double dn = 0, vn = 0;
    for (size_t i = 0; i < m; ++i) {
      dn += d[i] * d[i];
      vn += v[i] * v[i];
    }
    if (std::sqrt(dn / vn) < 1e-10) break;
  }
  quotient_parts(v, a, N);
  const double t = std::pow(std::max(a, 0.0) / N, 1.0 / (p - 2));
  if (collapsed || t * sup_abs(v) < 1e-8) {
    out.outcome = Outcome::Collapsed;
    return out;
  }
  std::vector<double> h(m);
  for (size_t i = 0; i < m; ++i) h[i] = t * v[i];
  // Newton on K_lambda h = g(h).
  std::vector<double> kh, F(m), dh;
  bool newton_ok = false;
  for (int k = 0; k < 60; ++k) {
    const Nonlinear nl = nonlinear_terms(f, h, p, true);
    kl.apply(h, kh);
    for (size_t i = 0; i < m; ++i) F[i] = kh[i] - nl.g[i];
    const Tridiag jac = combine(kl, 1.0, nl.jac, -1.0);
    if (!thomas(jac.off, jac.diag, jac.off, F, dh)) break;
    double step = 0.0;
    for (size_t i = 0; i < m; ++i) {
      h[i] -= dh[i];
      step = std::max(step, std::abs(dh[i]));
    }
    if (!std::isfinite(step)) break;
    if (sup_abs(h) < 1e-8) {  // descent stalled at roundoff and Newton ran to the trivial solution
      out.outcome = Outcome::Collapsed;
      return out;
    }
    if (step <= 1e-9 * sup_abs(h)) {  // quadratic convergence: the next step would sit at roundoff
      newton_ok = true;
      break;
    }
  }
  if (!newton_ok || !fd_polish(prob, f.rho, f.s, h)) return out;
  const double amp = sup_abs(h);
  if (amp < 1e-8) {
    out.outcome = Outcome::Collapsed;
    return out;
  }
  for (double x : h)
    if (x < -1e-10 * amp) return out;  // sign-changing branch, not a ground state
  out.outcome = Outcome::Converged;
  out.h = std::move(h);
  return out;
}

}  // namespace

void validate(const PdeProblem& prob) {
  require_admissible(prob.alpha, prob.n);
  require(std::isfinite(prob.lambda), ErrorCode::InvalidArgument, "lambda must be finite");
  require(std::isfinite(prob.p) && prob.p > 2, ErrorCode::Domain, "p must exceed 2");
  if (prob.n >= 3) {
    const double crit = 2.0 * prob.n / (prob.n - 2);
    require(prob.p < crit, ErrorCode::Domain, "p must be below the critical exponent 2n/(n-2) = " + std::to_string(crit));
  }
}

double radial_residual(const PdeProblem& prob, const RadialProfile& prof, bool nonlinear) {
  validate(prob);
  require(prof.rho.size() == prof.h.size() && prof.rho.size() >= 5, ErrorCode::InvalidArgument,
          "profile needs at least 5 nodes");
  const double c = hardy_coefficient(prob.alpha, prob.n);
  const auto& r = prof.rho;
  const auto& h = prof.h;
  const int n = prob.n;
  double worst = 0.0;
  for (size_t i = 2; i + 1 < r.size(); ++i) {
    const Stencil st = stencil(r, i);
    const double d2 = st.d2m * h[i - 1] + st.d2c * h[i] + st.d2p * h[i + 1];
    const double d1 = st.d1m * h[i - 1] + st.d1c * h[i] + st.d1p * h[i + 1];
    double res = -(d2 + (n - 1) / r[i] * d1) - c * h[i] / (r[i] * r[i]) + prob.lambda * h[i];
    if (nonlinear) res -= std::pow(std::max(h[i], 0.0), prob.p - 1);
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

double energy(const PdeProblem& prob, const RadialProfile& prof) {
  validate(prob);
  require(prof.rho.size() == prof.h.size(), ErrorCode::InvalidArgument, "profile rho/h lengths differ");
  const RadialForms f = assemble_radial(prob.alpha, prob.n, prof.rho);
  const std::vector<double> x(prof.h.begin(), prof.h.end() - 1);
  const double quad = f.energy.quad(x) + prob.lambda * f.mass.quad(x);
  const double N = nonlinear_terms(f, x, prob.p, false).N;
  return prob.n * omega(prob.n) * (0.5 * quad - N / prob.p);
}

double coercivity_constant(const PdeProblem& prob, double lF) {
  validate(prob);
  require(std::isfinite(lF) && lF > 0 && lF <= 1, ErrorCode::InvalidArgument, "lF must lie in (0,1]");
  const double j = bessel_zero(prob.alpha, 1);
  require(prob.lambda > -j * j, ErrorCode::Domain, "coercivity needs lambda > -j_alpha^2");
  const double base = std::min(1.0, 1.0 + prob.lambda / (j * j));
  if (prob.n == 2) return base;
  return 4.0 * prob.alpha * prob.alpha / ((prob.n - 2.0) * (prob.n - 2.0)) * base;
}

RadialProfile nonnegativity_projection(const RadialProfile& h) {
  RadialProfile out = h;
  for (double& v : out.h) v = std::max(v, 0.0);
  return out;
}

PdeSolution solve(const PdeProblem& prob, const MeshSpec& mesh, int attempts, std::uint64_t seed) {
  validate(prob);
  require(attempts >= 1 && attempts <= 1000, ErrorCode::InvalidArgument, "attempts must lie in [1,1000]");
  // Uniform by default: the difference residual amplifies roundoff by 1/rho_1^2.
  const double gamma = mesh.grading == 0.0 ? 1.0 : mesh.grading;
  const std::vector<double> rho = graded_mesh(1.0, mesh.M, gamma);
  const RadialForms f = assemble_radial(prob.alpha, prob.n, rho);
  const Tridiag kl = combine(f.energy, 1.0, f.mass, prob.lambda);
  const Tridiag pre = combine(f.energy, 1.0, f.mass, std::abs(prob.lambda));
  const size_t m = rho.size() - 1;

  PdeSolution sol;
  sol.attempts = attempts;
  bool have = false;
  for (int k = 0; k < attempts; ++k) {
    std::vector<double> v(m);
    if (k == 0) {
      for (size_t i = 0; i < m; ++i) v[i] = 1.0 - rho[i];
    } else {
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(k));
      std::uniform_real_distribution<double> ua(0.5, 3.0), uc(-2.0, 2.0);
      const double a = ua(rng), c = uc(rng);
      for (size_t i = 0; i < m; ++i) v[i] = (1.0 - std::pow(rho[i], a)) * std::exp(c * rho[i]);
    }
    const Attempt at = run_attempt(prob, f, kl, pre, std::move(v));
    if (at.outcome == Outcome::Collapsed) ++sol.collapsed_attempts;
    if (at.outcome != Outcome::Converged) continue;
    ++sol.converged_attempts;
    RadialProfile prof;
    prof.R = 1.0;
    prof.grading = gamma;
    prof.rho = rho;
    prof.h = at.h;
    prof.h.push_back(0.0);
    prof = nonnegativity_projection(prof);
    const double e = energy(prob, prof);
    const double res = radial_residual(prob, prof);
    if (!have || e < sol.energy || (e == sol.energy && res < sol.residual)) {
      sol.profile = prof;
      sol.energy = e;
      sol.residual = res;
      have = true;
    }
  }
  if (have) {
    double amp = 0.0;
    for (double v : sol.profile.h) amp = std::max(amp, v);
    sol.nonzero = true;
    if (sol.residual <= 1e-5 * amp) {
      sol.status = "nonzero solution found";
    } else {
      sol.inconclusive = true;
      sol.status = "nonzero candidate found but residual exceeds 1e-5 * sup norm";
    }
    return sol;
  }
  sol.profile.R = 1.0;
  sol.profile.grading = gamma;
  sol.profile.rho = rho;
  sol.profile.h.assign(rho.size(), 0.0);
  if (sol.collapsed_attempts == attempts) {
    sol.status = "no nonzero solution found (consistent with the threshold lambda > -j_alpha^2)";
  } else {
    sol.inconclusive = true;
    sol.status = "inconclusive: descent or Newton failed on some starts";
  }
  return sol;
}

NecessityIdentity necessity_identity(const PdeProblem& prob, const RadialProfile& u) {
  validate(prob);
  require(u.rho.size() == u.h.size() && u.rho.size() >= 5, ErrorCode::InvalidArgument, "profile needs at least 5 nodes");
  require(std::abs(u.rho.back() - 1.0) <= 1e-12, ErrorCode::InvalidArgument, "profile must live on (0,1]");
  const int n = prob.n;
  const double a = prob.alpha, p = prob.p;
  const double j = bessel_zero(a, 1);
  const double s = a - 0.5 * (n - 2);
  auto ustar = [&](double r) { return std::pow(r, -0.5 * (n - 2)) * bessel_j(a, j * r); };
  const auto& rho = u.rho;
  const auto& h = u.h;
  KahanSum lin, non;
  const double r1 = rho[0], h1 = std::max(h[0], 0.0), us1 = ustar(r1), rn = std::pow(r1, n);
  lin.add(us1 * h1 * rn / (2 * s + n));
  non.add(us1 * std::pow(h1, p - 1) * rn / (s * p + n));
  const GaussRule& gr = gauss_legendre(4);
  for (size_t e = 0; e + 1 < rho.size(); ++e) {
    const double lo = rho[e], len = rho[e + 1] - lo;
    for (size_t q = 0; q < gr.x.size(); ++q) {
      const double t = 0.5 * (1.0 + gr.x[q]);
      const double r = lo + len * t;
      const double w = 0.5 * len * gr.w[q] * std::pow(r, n - 1);
      const double v = std::max(h[e] * (1 - t) + h[e + 1] * t, 0.0);
      const double us = ustar(r);
      lin.add(w * us * v);
      non.add(w * us * std::pow(v, p - 1));
    }
  }
  NecessityIdentity out;
  out.lhs = (prob.lambda + j * j) * lin.value();
  out.rhs = non.value();
  out.relative_error = out.rhs != 0.0 ? std::abs(out.lhs - out.rhs) / std::abs(out.rhs) : std::abs(out.lhs);
  return out;
}

}  // namespace bpv
