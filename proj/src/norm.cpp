#include "bpv/norm.hpp"

#include <Eigen/Dense>
#include <boost/math/special_functions/erf.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "bpv/error.hpp"
#include "bpv/quadrature.hpp"
#include "bpv/specfun.hpp"

namespace bpv {
namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
                           47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107};

double radical_inverse(long long index, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

std::vector<double> identity(int n) {
  std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) a[static_cast<size_t>(i) * n + i] = 1.0;
  return a;
}

bool is_identity(const std::vector<double>& a, int n) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (a[static_cast<size_t>(i) * n + j] != (i == j ? 1.0 : 0.0)) return false;
  return true;
}

// True when F is a multiple of a Euclidean-type quadratic form.
bool is_riemannian(const NormSpec& s) {
  if (s.family == NormFamily::Quadratic) return true;
  if (s.family == NormFamily::Lp) return s.p == 2.0;
  if (s.weights[0] == 0.0) return true;
  return s.p == 2.0 && is_identity(s.matrix, s.n);
}

}  // namespace

NormSpec euclidean_norm(int n) { return quadratic_norm(n, identity(n), 1.0); }

NormSpec lp_norm(int n, double p, double kappa) {
  NormSpec s;
  s.n = n;
  s.family = NormFamily::Lp;
  s.p = p;
  s.kappa = kappa;
  s.weights = {1.0, 0.0};
  validate(s);
  return s;
}

NormSpec quadratic_norm(int n, std::vector<double> matrix, double kappa) {
  NormSpec s;
  s.n = n;
  s.family = NormFamily::Quadratic;
  s.matrix = std::move(matrix);
  s.kappa = kappa;
  s.weights = {0.0, 1.0};
  validate(s);
  return s;
}

NormSpec mix_norm(int n, double p, std::vector<double> matrix, double w_lp, double kappa) {
  NormSpec s;
  s.n = n;
  s.family = NormFamily::Mix;
  s.p = p;
  s.matrix = std::move(matrix);
  s.weights = {w_lp, 1.0 - w_lp};
  s.kappa = kappa;
  validate(s);
  return s;
}

void validate(const NormSpec& s) {
  using E = ErrorCode;
  require(s.n >= 2 && s.n <= 16, E::InvalidArgument, "norm dimension n must be in [2,16]");
  require(std::isfinite(s.kappa) && s.kappa > 0, E::InvalidArgument, "kappa must be a positive finite number");
  if (s.family != NormFamily::Quadratic)
    require(std::isfinite(s.p) && s.p > 1.0, E::InvalidArgument, "exponent p must be a finite number > 1");
  if (s.family != NormFamily::Lp) {
    const size_t nn = static_cast<size_t>(s.n) * s.n;
    require(s.matrix.empty() || s.matrix.size() == nn, E::InvalidArgument, "matrix must be n x n");
    if (!s.matrix.empty()) {
      Eigen::MatrixXd a(s.n, s.n);
      for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) {
          const double v = s.matrix[static_cast<size_t>(i) * s.n + j];
          require(std::isfinite(v), E::InvalidArgument, "matrix entries must be finite");
          a(i, j) = v;
        }
      const double scale = a.cwiseAbs().maxCoeff();
      require((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, E::InvalidArgument,
              "matrix must be symmetric");
      Eigen::LLT<Eigen::MatrixXd> llt(a);
      require(llt.info() == Eigen::Success, E::InvalidArgument, "matrix must be positive definite");
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
      require(es.eigenvalues()(0) > 1e-12 * es.eigenvalues()(s.n - 1), E::InvalidArgument,
              "matrix is numerically singular");
    }
  }
  if (s.family == NormFamily::Mix) {
    const double w0 = s.weights[0], w1 = s.weights[1];
    require(std::isfinite(w0) && std::isfinite(w1) && w0 >= 0 && w1 >= 0, E::InvalidArgument,
            "mix weights must be nonnegative");
    require(std::abs(w0 + w1 - 1.0) <= 1e-12, E::InvalidArgument, "mix weights must sum to 1");
  }
}

Norm::Norm(const NormSpec& spec) : spec_(spec) {
  if (spec_.family != NormFamily::Lp && spec_.matrix.empty()) spec_.matrix = identity(spec_.n);
  if (spec_.family == NormFamily::Lp) spec_.weights = {1.0, 0.0};
  if (spec_.family == NormFamily::Quadratic) spec_.weights = {0.0, 1.0};
  validate(spec_);
  q_ = spec_.p / (spec_.p - 1.0);
  if (spec_.family != NormFamily::Lp) {
    const int n = spec_.n;
    amat_ = spec_.matrix;
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(amat_.data(), n, n);
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    Eigen::MatrixXd l = llt.matrixL();
    chol_.assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) chol_[static_cast<size_t>(i) * n + j] = l(i, j);
  }
}

double Norm::lp(const double* x) const {
  double m = 0.0;
  for (int i = 0; i < spec_.n; ++i) m = std::max(m, std::abs(x[i]));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (int i = 0; i < spec_.n; ++i) s += std::pow(std::abs(x[i]) / m, spec_.p);
  return m * std::pow(s, 1.0 / spec_.p);
}

double Norm::lq(const double* x) const {
  double m = 0.0;
  for (int i = 0; i < spec_.n; ++i) m = std::max(m, std::abs(x[i]));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (int i = 0; i < spec_.n; ++i) s += std::pow(std::abs(x[i]) / m, q_);
  return m * std::pow(s, 1.0 / q_);
}

double Norm::quad(const double* x) const {
  // |L' x| with A = L L'.
  const int n = spec_.n;
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    double y = 0.0;
    for (int i = j; i < n; ++i) y += chol_[static_cast<size_t>(i) * n + j] * x[i];
    s += y * y;
  }
  return std::sqrt(s);
}

double Norm::quad_dual(const double* xi) const {
  // |L^{-1} xi|.
  const int n = spec_.n;
  double y[16];
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = xi[i];
    for (int j = 0; j < i; ++j) v -= chol_[static_cast<size_t>(i) * n + j] * y[j];
    y[i] = v / chol_[static_cast<size_t>(i) * n + i];
    s += y[i] * y[i];
  }
  return std::sqrt(s);
}

void Norm::lp_grad(const double* x, double* g) const {
  const double nrm = lp(x);
  for (int i = 0; i < spec_.n; ++i) {
    const double r = std::abs(x[i]) / nrm;
    g[i] = std::copysign(std::pow(r, spec_.p - 1.0), x[i]);
    if (x[i] == 0.0) g[i] = 0.0;
  }
}

void Norm::quad_grad(const double* x, double* g) const {
  const int n = spec_.n;
  const double nrm = quad(x);
  for (int i = 0; i < n; ++i) {
    double v = 0.0;
    for (int j = 0; j < n; ++j) v += amat_[static_cast<size_t>(i) * n + j] * x[j];
    g[i] = v / nrm;
  }
}

double Norm::eval(const double* x) const {
  switch (spec_.family) {
    case NormFamily::Lp: return spec_.kappa * lp(x);
    case NormFamily::Quadratic: return spec_.kappa * quad(x);
    case NormFamily::Mix: {
      double v = 0.0;
      if (spec_.weights[0] > 0) v += spec_.weights[0] * lp(x);
      if (spec_.weights[1] > 0) v += spec_.weights[1] * quad(x);
      return spec_.kappa * v;
    }
  }
  return 0.0;
}

void Norm::gradient(const double* x, double* g) const {
  const int n = spec_.n;
  double a[16], b[16];
  for (int i = 0; i < n; ++i) a[i] = b[i] = 0.0;
  if (spec_.weights[0] > 0) lp_grad(x, a);
  if (spec_.weights[1] > 0) quad_grad(x, b);
  for (int i = 0; i < n; ++i) g[i] = spec_.kappa * (spec_.weights[0] * a[i] + spec_.weights[1] * b[i]);
}

void Norm::half_square_hessian(const double* v, double* hess) const {
  const int n = spec_.n;
  if (spec_.family == NormFamily::Quadratic) {
    const double k2 = spec_.kappa * spec_.kappa;
    for (int i = 0; i < n * n; ++i) hess[i] = k2 * amat_[i];
    return;
  }
  double len = 0.0;
  for (int i = 0; i < n; ++i) len += v[i] * v[i];
  const double h = 1e-5 * std::sqrt(len);
  double xp[16], xm[16], gp[16], gm[16];
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) xp[i] = xm[i] = v[i];
    xp[j] += h;
    xm[j] -= h;
    gradient(xp, gp);
    gradient(xm, gm);
    const double fp = eval(xp), fm = eval(xm);
    for (int i = 0; i < n; ++i) hess[static_cast<size_t>(i) * n + j] = (fp * gp[i] - fm * gm[i]) / (2 * h);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double m = 0.5 * (hess[static_cast<size_t>(i) * n + j] + hess[static_cast<size_t>(j) * n + i]);
      hess[static_cast<size_t>(i) * n + j] = hess[static_cast<size_t>(j) * n + i] = m;
    }
}

Norm::PolarCertificate Norm::polar_certified(const double* xi) const {
  const int n = spec_.n;
  const double kappa = spec_.kappa, w0 = spec_.weights[0], w1 = spec_.weights[1];
  PolarCertificate cert;
  double xn = 0.0;
  for (int i = 0; i < n; ++i) xn = std::max(xn, std::abs(xi[i]));
  if (xn == 0.0) return cert;
  require(w0 > 0 && w1 > 0, ErrorCode::Internal, "certified polar needs a proper mix");

  using Vec = Eigen::VectorXd;
  Vec xiv = Eigen::Map<const Vec>(xi, n);
  auto phi = [&](const Vec& v) {
    const double f = eval(v.data());
    return 0.5 * f * f - xiv.dot(v);
  };
  auto bounds = [&](const Vec& v, double& lo, double& hi) {
    const double f = eval(v.data());
    lo = std::max(0.0, xiv.dot(v) / f);
    double gp[16];
    lp_grad(v.data(), gp);
    Vec x1(n), x2(n);
    for (int i = 0; i < n; ++i) {
      x1(i) = f * kappa * w0 * gp[i];
      x2(i) = xiv(i) - x1(i);
    }
    hi = std::max(lq(x1.data()) / (kappa * w0), quad_dual(x2.data()) / (kappa * w1));
  };

  // Start from the maximizer for the quadratic part, rescaled along its ray.
  Vec v(n);
  {
    double y[16];
    for (int i = 0; i < n; ++i) {
      double s = xi[i];
      for (int j = 0; j < i; ++j) s -= chol_[static_cast<size_t>(i) * n + j] * y[j];
      y[i] = s / chol_[static_cast<size_t>(i) * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = y[i];
      for (int j = i + 1; j < n; ++j) s -= chol_[static_cast<size_t>(j) * n + i] * v(j);
      v(i) = s / chol_[static_cast<size_t>(i) * n + i];
    }
  }
  {
    const double f = eval(v.data());
    v *= xiv.dot(v) / (f * f);
  }
  double lo = 0, hi = 0;
  Eigen::MatrixXd hmat(n, n);
  int it = 0, stalled = 0;
  double best_lo = 0, best_hi = std::numeric_limits<double>::infinity();
  for (; it < 200; ++it) {
    bounds(v, lo, hi);
    // Both bounds are valid at every iterate; keep the tightest pair.
    best_lo = std::max(best_lo, lo);
    if (hi < best_hi) {
      if (hi < best_hi - 0.5 * (best_hi - best_lo)) stalled = 0;
      best_hi = hi;
    }
    if (best_hi - best_lo <= 1e-13 * best_hi || ++stalled > 8) break;
    const double f = eval(v.data());
    double g[16];
    gradient(v.data(), g);
    Vec grad(n);
    for (int i = 0; i < n; ++i) grad(i) = f * g[i] - xi[i];
    half_square_hessian(v.data(), hmat.data());
    const double scale = hmat.diagonal().cwiseAbs().maxCoeff();
    Vec d = (hmat + 1e-12 * scale * Eigen::MatrixXd::Identity(n, n)).ldlt().solve(-grad);
    if (!d.allFinite() || grad.dot(d) >= 0) d = -grad / std::max(scale, 1e-300);
    const double p0 = phi(v);
    double a = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      Vec trial = v + a * d;
      if (phi(trial) <= p0 + 1e-4 * a * grad.dot(d)) {
        v = trial;
        moved = true;
        break;
      }
      a *= 0.5;
    }
    if (!moved) break;
  }
  lo = best_lo;
  hi = best_hi;
  cert.lower = lo;
  cert.upper = hi;
  cert.iterations = it;
  if (!(hi - lo <= 1e-8 * hi)) fail(ErrorCode::NoConvergence, "polar transform supremum did not certify to 1e-8");
  return cert;
}

double Norm::polar(const double* xi) const {
  switch (spec_.family) {
    case NormFamily::Lp: return lq(xi) / spec_.kappa;
    case NormFamily::Quadratic: return quad_dual(xi) / spec_.kappa;
    case NormFamily::Mix: {
      if (spec_.weights[0] == 0.0) return quad_dual(xi) / spec_.kappa;
      if (spec_.weights[1] == 0.0) return lq(xi) / spec_.kappa;
      const PolarCertificate c = polar_certified(xi);
      return 0.5 * (c.lower + c.upper);
    }
  }
  return 0.0;
}

double norm_eval(const NormSpec& spec, std::span<const double> x) {
  require(static_cast<int>(x.size()) == spec.n, ErrorCode::InvalidArgument, "vector dimension does not match the norm");
  for (double v : x) require(std::isfinite(v), ErrorCode::InvalidArgument, "vector entries must be finite");
  return Norm(spec).eval(x.data());
}

double polar_eval(const NormSpec& spec, std::span<const double> xi) {
  require(static_cast<int>(xi.size()) == spec.n, ErrorCode::InvalidArgument, "covector dimension does not match the norm");
  for (double v : xi) require(std::isfinite(v), ErrorCode::InvalidArgument, "covector entries must be finite");
  return Norm(spec).polar(xi.data());
}

VolumeEstimate unit_ball_volume(const NormSpec& spec) {
  const Norm norm(spec);
  const NormSpec& s = norm.spec();
  const int n = s.n;
  VolumeEstimate out;
  if (s.family == NormFamily::Lp || (s.family == NormFamily::Mix && s.weights[1] == 0.0)) {
    const double k = s.kappa * (s.family == NormFamily::Mix ? s.weights[0] : 1.0);
    out.value = std::exp(n * std::log(2.0) + n * std::lgamma(1.0 + 1.0 / s.p) - std::lgamma(1.0 + n / s.p)) /
                std::pow(k, n);
    out.method = "closed form";
    return out;
  }
  if (s.family == NormFamily::Quadratic || s.weights[0] == 0.0) {
    const double k = s.kappa * (s.family == NormFamily::Mix ? s.weights[1] : 1.0);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(s.matrix.data(), n, n);
    out.value = omega(n) / (std::pow(k, n) * std::sqrt(a.determinant()));
    out.method = "closed form";
    return out;
  }
  if (n == 2) {
    auto f = [&](double th) {
      const double x[2] = {std::cos(th), std::sin(th)};
      const double r = norm.eval(x);
      return 1.0 / (r * r);
    };
    // F is even, so half a turn covers the area once.
    QuadResult q = integrate(f, 0.0, M_PI, 0.0, 1e-14, {M_PI / 4, M_PI / 2, 3 * M_PI / 4});
    out.value = q.value;
    out.error = q.error;
    out.method = "adaptive polar quadrature";
    return out;
  }
  if (n == 3) {
    double inner_err = 0.0;
    auto outer = [&](double th) {
      const double c = std::cos(th), sn = std::sin(th);
      auto inner = [&](double ph) {
        const double x[3] = {std::sin(ph) * c, std::sin(ph) * sn, std::cos(ph)};
        const double r = norm.eval(x);
        return std::sin(ph) / (r * r * r);
      };
      QuadResult q = integrate(inner, 0.0, M_PI, 0.0, 1e-13, {M_PI / 2});
      inner_err = std::max(inner_err, q.error);
      return q.value;
    };
    QuadResult q = integrate(outer, 0.0, M_PI, 0.0, 1e-12, {M_PI / 2});
    out.value = 2.0 * q.value / 3.0;
    out.error = 2.0 * (q.error + M_PI * inner_err) / 3.0;
    out.method = "nested adaptive spherical quadrature";
    return out;
  }
  if (n <= 5) {
    // Tensor Gauss-Legendre in hyperspherical angles on [0,pi/2] and
    // [pi/2,pi], refined until two resolutions agree. For p < 2 a quintic
    // smoothstep substitution flattens the kinks of the l^p part at the
    // coordinate hyperplanes, which sit at the panel ends.
    const bool smooth = s.p < 2.0;
    auto tensor = [&](int pts) {
      const GaussRule& gr = gauss_legendre(pts);
      std::vector<double> nodes, wts;
      for (int panel = 0; panel < 2; ++panel) {
        const double a = panel * M_PI / 2, len = M_PI / 2;
        for (int i = 0; i < pts; ++i) {
          const double u = 0.5 * (1.0 + gr.x[i]);
          double psi = u, dpsi = 1.0;
          if (smooth) {
            psi = u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
            dpsi = 30.0 * u * u * (1.0 - u) * (1.0 - u);
          }
          nodes.push_back(a + len * psi);
          wts.push_back(0.5 * gr.w[i] * len * dpsi);
        }
      }
      const int m = static_cast<int>(nodes.size());
      const int depth = n - 1;
      std::vector<int> idx(depth, 0);
      KahanSum acc;
      double x[16];
      for (;;) {
        double w = 1.0, sprod = 1.0;
        for (int k = 0; k < depth - 1; ++k) {
          const double ph = nodes[idx[k]];
          x[k] = sprod * std::cos(ph);
          w *= wts[idx[k]] * std::pow(std::sin(ph), n - 2 - k);
          sprod *= std::sin(ph);
        }
        const double th = nodes[idx[depth - 1]];
        x[n - 2] = sprod * std::cos(th);
        x[n - 1] = sprod * std::sin(th);
        w *= wts[idx[depth - 1]];
        acc.add(w * std::pow(norm.eval(x), -n));
        int k = depth - 1;
        while (k >= 0 && ++idx[k] == m) idx[k--] = 0;
        if (k < 0) break;
      }
      return 2.0 * acc.value() / n;
    };
    const double budget = 3e7;
    int pts = 8;
    double prev = tensor(pts);
    for (;;) {
      const int next = pts * 3 / 2;
      if (std::pow(2.0 * next, n - 1) > budget) break;
      const double cur = tensor(next);
      out.error = std::abs(cur - prev);
      prev = cur;
      pts = next;
      if (out.error <= 1e-10 * std::abs(cur)) break;
    }
    out.value = prev;
    out.method = "tensor Gauss-Legendre spherical quadrature";
    return out;
  }
  // n >= 6: randomized quasi-Monte Carlo over the sphere. Halton points are
  // pushed through the normal quantile so the integrand stays smooth.
  constexpr int kShifts = 16;
  constexpr int kPoints = 1 << 16;
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> means;
  for (int r = 0; r < kShifts; ++r) {
    std::vector<double> shift(n);
    for (double& v : shift) v = uni(rng);
    KahanSum acc;
    double x[16];
    for (long long idx = 1; idx <= kPoints; ++idx) {
      double r2 = 0.0;
      for (int d = 0; d < n; ++d) {
        double u = radical_inverse(idx, kPrimes[d]) + shift[d];
        u -= std::floor(u);
        u = std::clamp(u, 1e-300, 1.0 - 1e-16);
        x[d] = -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
        r2 += x[d] * x[d];
      }
      if (r2 == 0.0) continue;
      acc.add(std::pow(norm.eval(x) / std::sqrt(r2), -n));
    }
    means.push_back(acc.value() / kPoints);
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= kShifts;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= (kShifts - 1);
  out.value = omega(n) * mean;
  out.error = omega(n) * std::sqrt(var / kShifts);
  out.method = "randomized quasi-Monte Carlo";
  return out;
}

NormSpec normalize(const NormSpec& spec) {
  NormSpec out = Norm(spec).spec();
  const double v = unit_ball_volume(out).value;
  out.kappa = spec.kappa * std::pow(v / omega(spec.n), 1.0 / spec.n);
  return out;
}

std::vector<double> sample_directions(int n, int count) {
  require(n >= 2 && n <= 16, ErrorCode::InvalidArgument, "dimension must be in [2,16]");
  std::vector<double> dirs;
  dirs.reserve(static_cast<size_t>(n) * count);
  if (n == 2) {
    const double g = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double th = std::fmod((k + 0.5) * g, M_PI);
      dirs.push_back(std::cos(th));
      dirs.push_back(std::sin(th));
    }
    return dirs;
  }
  double x[16];
  int got = 0;
  for (long long idx = 1; got < count; ++idx) {
    double r2 = 0.0;
    for (int d = 0; d < n; ++d) {
      x[d] = 2.0 * radical_inverse(idx, kPrimes[d]) - 1.0;
      r2 += x[d] * x[d];
    }
    if (r2 > 1.0 || r2 < 1e-6) continue;
    const double len = std::sqrt(r2);
    for (int d = 0; d < n; ++d) dirs.push_back(x[d] / len);
    ++got;
  }
  return dirs;
}

double uniformity_constant(const NormSpec& spec, int sample_budget) {
  require(sample_budget >= 1000, ErrorCode::InvalidArgument, "sample_budget must be >= 1000");
  const Norm norm(spec);
  if (is_riemannian(norm.spec())) return 1.0;
  const int n = spec.n;
  const std::vector<double> dirs = sample_directions(n, sample_budget);
  std::vector<double> hess(static_cast<size_t>(sample_budget) * n * n);
  for (int k = 0; k < sample_budget; ++k) {
    double* h = &hess[static_cast<size_t>(k) * n * n];
    norm.half_square_hessian(&dirs[static_cast<size_t>(k) * n], h);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(h, n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()(0), lmax = es.eigenvalues()(n - 1);
    if (!(lmax > 0) || lmin < -1e-6 * lmax)
      fail(ErrorCode::Domain, "Hessian of F^2/2 is indefinite; input is not a strictly convex norm");
  }
  double best = 1.0;
  std::vector<double> q(sample_budget);
  for (int yi = 0; yi < sample_budget; ++yi) {
    const double* y = &dirs[static_cast<size_t>(yi) * n];
    double qmin = std::numeric_limits<double>::infinity(), qmax = 0.0;
    for (int k = 0; k < sample_budget; ++k) {
      const double* h = &hess[static_cast<size_t>(k) * n * n];
      double v = 0.0;
      for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += h[i * n + j] * y[j];
        v += y[i] * row;
      }
      v = std::max(v, 0.0);
      qmin = std::min(qmin, v);
      qmax = std::max(qmax, v);
    }
    if (!(qmax > 0)) fail(ErrorCode::Domain, "degenerate Hessian family in uniformity estimate");
    best = std::min(best, qmin / qmax);
  }
  return best;
}

// JSON ----------------------------------------------------------------------

NormSpec norm_from_json(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("norm spec is not valid JSON: ") + e.what());
  }
  require(j.is_object(), ErrorCode::Parse, "norm spec must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    require(k == "n" || k == "family" || k == "p" || k == "matrix" || k == "weights" || k == "kappa",
            ErrorCode::Parse, "unknown key in norm spec: " + k);
  }
  auto number = [&](const char* key) -> double {
    require(j.contains(key) && j[key].is_number(), ErrorCode::Parse, std::string("norm spec field '") + key + "' must be a number");
    return j[key].get<double>();
  };
  NormSpec s;
  require(j.contains("n") && j["n"].is_number_integer(), ErrorCode::Parse, "norm spec field 'n' must be an integer");
  s.n = j["n"].get<int>();
  require(j.contains("family") && j["family"].is_string(), ErrorCode::Parse, "norm spec field 'family' must be a string");
  const std::string fam = j["family"].get<std::string>();
  if (fam == "lp") {
    s.family = NormFamily::Lp;
    s.weights = {1.0, 0.0};
  } else if (fam == "quadratic") {
    s.family = NormFamily::Quadratic;
    s.weights = {0.0, 1.0};
  } else if (fam == "mix") {
    s.family = NormFamily::Mix;
  } else {
    fail(ErrorCode::Parse, "norm spec family must be one of lp, quadratic, mix");
  }
  if (s.family != NormFamily::Quadratic) s.p = number("p");
  s.kappa = j.contains("kappa") ? number("kappa") : 1.0;
  if (j.contains("matrix")) {
    require(s.family != NormFamily::Lp, ErrorCode::Parse, "lp norm spec takes no matrix");
    const json& m = j["matrix"];
    require(m.is_array() && static_cast<int>(m.size()) == s.n, ErrorCode::Parse, "matrix must have n rows");
    for (const json& row : m) {
      require(row.is_array() && static_cast<int>(row.size()) == s.n, ErrorCode::Parse, "matrix rows must have n entries");
      for (const json& v : row) {
        require(v.is_number(), ErrorCode::Parse, "matrix entries must be numbers");
        s.matrix.push_back(v.get<double>());
      }
    }
  }
  if (s.family == NormFamily::Mix) {
    require(j.contains("weights") && j["weights"].is_array() && j["weights"].size() == 2, ErrorCode::Parse,
            "mix norm spec needs weights [w_lp, w_quadratic]");
    for (int i = 0; i < 2; ++i) {
      require(j["weights"][i].is_number(), ErrorCode::Parse, "weights must be numbers");
      s.weights[i] = j["weights"][i].get<double>();
    }
  } else {
    require(!j.contains("weights"), ErrorCode::Parse, "weights are only valid for the mix family");
  }
  validate(s);
  return s;
}

std::string norm_to_json(const NormSpec& spec) {
  nlohmann::ordered_json j;
  j["n"] = spec.n;
  j["family"] = spec.family == NormFamily::Lp ? "lp" : spec.family == NormFamily::Quadratic ? "quadratic" : "mix";
  if (spec.family != NormFamily::Quadratic) j["p"] = spec.p;
  if (spec.family != NormFamily::Lp) {
    const std::vector<double> a = spec.matrix.empty() ? identity(spec.n) : spec.matrix;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int i = 0; i < spec.n; ++i) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (int k = 0; k < spec.n; ++k) row.push_back(a[static_cast<size_t>(i) * spec.n + k]);
      rows.push_back(row);
    }
    j["matrix"] = rows;
  }
  if (spec.family == NormFamily::Mix) j["weights"] = {spec.weights[0], spec.weights[1]};
  j["kappa"] = spec.kappa;
  return j.dump();
}

NormSpec read_norm_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open norm file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return norm_from_json(ss.str());
}

}  // namespace bpv
