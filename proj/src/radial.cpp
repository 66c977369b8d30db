#include "bpv/radial.hpp"

#include <cmath>
#include <string>

#include "bpv/error.hpp"
#include "bpv/quadrature.hpp"

namespace bpv {

std::vector<double> graded_mesh(double R, int M, double gamma) {
  require(std::isfinite(R) && R > 0, ErrorCode::InvalidArgument, "radius must be positive");
  require(M >= 5, ErrorCode::InvalidArgument, "mesh needs at least 5 nodes");
  require(std::isfinite(gamma) && gamma >= 1, ErrorCode::InvalidArgument, "grading exponent must be >= 1");
  std::vector<double> rho(M);
  for (int i = 1; i <= M; ++i) rho[i - 1] = R * std::pow(static_cast<double>(i) / M, gamma);
  rho[M - 1] = R;
  return rho;
}

double default_grading(double alpha, int n) { return alpha == 0.5 * (n - 2) ? 1.0 : 2.0; }

double hardy_coefficient(double alpha, int n) { return 0.25 * (n - 2) * (n - 2) - alpha * alpha; }

void require_admissible(double alpha, int n) {
  require(n >= 2 && n <= 64, ErrorCode::Domain, "dimension n must be in [2,64]");
  require(std::isfinite(alpha), ErrorCode::Domain, "alpha must be finite");
  if (n == 2) {
    require(alpha == 0.0, ErrorCode::Domain, "for n = 2 only alpha = 0 is admissible");
  } else {
    require(alpha != 0.0, ErrorCode::Domain,
            "alpha = 0 with n >= 3 has no extremal in the energy space; choose 0 < alpha <= (n-2)/2");
    require(alpha > 0 && alpha <= 0.5 * (n - 2), ErrorCode::Domain,
            "alpha must lie in (0, (n-2)/2] for n = " + std::to_string(n));
  }
}

double Tridiag::quad(const std::vector<double>& x) const {
  KahanSum s;
  const size_t m = diag.size();
  for (size_t i = 0; i < m; ++i) {
    s.add(diag[i] * x[i] * x[i]);
    if (i + 1 < m) s.add(2.0 * off[i] * x[i] * x[i + 1]);
  }
  return s.value();
}

void Tridiag::apply(const std::vector<double>& x, std::vector<double>& y) const {
  const size_t m = diag.size();
  y.assign(m, 0.0);
  for (size_t i = 0; i < m; ++i) {
    y[i] = diag[i] * x[i];
    if (i > 0) y[i] += off[i - 1] * x[i - 1];
    if (i + 1 < m) y[i] += off[i] * x[i + 1];
  }
}

std::vector<double> Tridiag::solve_spd(const std::vector<double>& b) const {
  const size_t m = diag.size();
  std::vector<double> d(m), l(m, 0.0), y(m);
  for (size_t i = 0; i < m; ++i) {
    d[i] = diag[i];
    if (i > 0) {
      l[i] = off[i - 1] / d[i - 1];
      d[i] -= l[i] * off[i - 1];
    }
    if (!(d[i] > 0)) fail(ErrorCode::NoConvergence, "tridiagonal system is not positive definite");
  }
  for (size_t i = 0; i < m; ++i) y[i] = b[i] - (i > 0 ? l[i] * y[i - 1] : 0.0);
  for (size_t i = m; i-- > 0;) {
    y[i] /= d[i];
    if (i + 1 < m) y[i] -= l[i + 1] * y[i + 1];
  }
  return y;
}

RadialForms assemble_radial(double alpha, int n, const std::vector<double>& rho) {
  require(rho.size() >= 5, ErrorCode::InvalidArgument, "mesh needs at least 5 nodes");
  require(rho[0] > 0, ErrorCode::InvalidArgument, "mesh must start at a positive radius");
  for (size_t i = 1; i < rho.size(); ++i)
    require(rho[i] > rho[i - 1], ErrorCode::InvalidArgument, "mesh must be strictly increasing");
  RadialForms f;
  f.n = n;
  f.alpha = alpha;
  f.c = hardy_coefficient(alpha, n);
  f.s = alpha - 0.5 * (n - 2);
  f.rho = rho;
  const size_t M = rho.size();
  const size_t m = M - 1;  // unknowns at rho[0..M-2]
  for (Tridiag* t : {&f.stiff, &f.hardy, &f.mass}) {
    t->diag.assign(m, 0.0);
    t->off.assign(m > 0 ? m - 1 : 0, 0.0);
  }
  const double r1 = rho[0];
  const double two_a = 2.0 * alpha;  // = 2s + n - 2
  if (two_a > 0) {
    f.stiff.diag[0] += f.s * f.s * std::pow(r1, n - 2) / two_a;
    if (f.c != 0.0) f.hardy.diag[0] += std::pow(r1, n - 2) / two_a;
  }
  f.mass.diag[0] += std::pow(r1, n) / (2.0 * f.s + n);

  const GaussRule& g = gauss_legendre(6);
  for (size_t e = 0; e + 1 < M; ++e) {
    const double a = rho[e], b = rho[e + 1], len = b - a;
    double ks = 0, kh[3] = {0, 0, 0}, km[3] = {0, 0, 0};
    for (size_t q = 0; q < g.x.size(); ++q) {
      const double t = 0.5 * (1.0 + g.x[q]);
      const double r = a + len * t;
      const double w = 0.5 * len * g.w[q];
      const double phi0 = 1.0 - t, phi1 = t;
      const double rn1 = std::pow(r, n - 1);
      const double rn3 = std::pow(r, n - 3);
      ks += w * rn1;
      kh[0] += w * rn3 * phi0 * phi0;
      kh[1] += w * rn3 * phi0 * phi1;
      kh[2] += w * rn3 * phi1 * phi1;
      km[0] += w * rn1 * phi0 * phi0;
      km[1] += w * rn1 * phi0 * phi1;
      km[2] += w * rn1 * phi1 * phi1;
    }
    ks /= len * len;
    auto add = [&](Tridiag& t, double d0, double o, double d1) {
      t.diag[e] += d0;
      if (e + 1 < m) {
        t.diag[e + 1] += d1;
        t.off[e] += o;
      }
    };
    add(f.stiff, ks, -ks, ks);
    add(f.hardy, kh[0], kh[1], kh[2]);
    add(f.mass, km[0], km[1], km[2]);
  }
  f.energy = f.stiff;
  for (size_t i = 0; i < m; ++i) f.energy.diag[i] -= f.c * f.hardy.diag[i];
  for (size_t i = 0; i + 1 < m; ++i) f.energy.off[i] -= f.c * f.hardy.off[i];
  return f;
}

}  // namespace bpv
