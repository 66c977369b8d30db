#include "bpv/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bpv/error.hpp"
#include "bpv/rearrange.hpp"
#include "bpv/specfun.hpp"

namespace bpv {
namespace {

void require_profile(const RadialProfile& p) {
  require(p.rho.size() == p.h.size(), ErrorCode::InvalidArgument, "profile rho/h lengths differ");
  require(p.rho.size() >= 5, ErrorCode::InvalidArgument, "profile needs at least 5 nodes");
  for (double v : p.h) require(std::isfinite(v), ErrorCode::InvalidArgument, "profile values must be finite");
}

double sup_norm(const std::vector<double>& h) {
  double m = 0.0;
  for (double v : h) m = std::max(m, std::abs(v));
  return m;
}

MeshSpec resolve(const MeshSpec& mesh, double alpha, int n) {
  MeshSpec m = mesh;
  if (m.grading == 0.0) m.grading = default_grading(alpha, n);
  return m;
}

}  // namespace

double sharp_constant(double alpha, int n, double volume) {
  require(n >= 2, ErrorCode::Domain, "dimension n must be >= 2");
  require(std::isfinite(volume) && volume > 0, ErrorCode::InvalidArgument, "volume must be positive");
  if (n == 2)
    require(alpha == 0.0, ErrorCode::Domain, "for n = 2 only alpha = 0 is admissible");
  else
    require(alpha >= 0 && alpha <= 0.5 * (n - 2), ErrorCode::Domain, "alpha must lie in [0, (n-2)/2]");
  const double j = bessel_zero(alpha, 1);
  return j * j * std::pow(omega(n) / volume, 2.0 / n);
}

RadialProfile extremal_profile(double alpha, int n, double R, const MeshSpec& mesh) {
  require_admissible(alpha, n);
  const MeshSpec m = resolve(mesh, alpha, n);
  RadialProfile p;
  p.R = R;
  p.grading = m.grading;
  p.rho = graded_mesh(R, m.M, m.grading);
  const double k = bessel_zero(alpha, 1) / R;
  p.h.resize(p.rho.size());
  for (size_t i = 0; i < p.rho.size(); ++i)
    p.h[i] = std::pow(p.rho[i], -0.5 * (n - 2)) * bessel_j(alpha, k * p.rho[i]);
  return p;
}

double extremal_origin_constant(double alpha, int n, double R) {
  require_admissible(alpha, n);
  const double k = bessel_zero(alpha, 1) / R;
  return std::pow(0.5 * k, alpha) / std::tgamma(alpha + 1.0);
}

double euler_lagrange_residual(const RadialProfile& p, double alpha, int n, double Q) {
  require_profile(p);
  // With h = rho^s w, s = alpha - (n-2)/2, the operator is
  // rho^{-s} (rho^{n-1+2s} w')' + Q rho^{n-1} h. Differencing the smooth w keeps
  // the first nodes accurate when h is singular; s = 0 is the plain flux form.
  const double s = alpha - 0.5 * (n - 2);
  const double m = n - 1 + 2 * s;
  const auto& r = p.rho;
  std::vector<double> w(r.size());
  for (size_t i = 0; i < r.size(); ++i) w[i] = p.h[i] * std::pow(r[i], -s);
  double worst = 0.0;
  // 0-based i >= 2 skips the first two cells.
  for (size_t i = 2; i + 1 < r.size(); ++i) {
    const double dp = r[i + 1] - r[i], dm = r[i] - r[i - 1];
    const double rp = 0.5 * (r[i + 1] + r[i]), rm = 0.5 * (r[i] + r[i - 1]);
    const double flux =
        (std::pow(rp, m) * (w[i + 1] - w[i]) / dp - std::pow(rm, m) * (w[i] - w[i - 1]) / dm) / (0.5 * (dp + dm));
    const double res = std::pow(r[i], -s) * flux + Q * std::pow(r[i], n - 1) * p.h[i];
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

double radial_rayleigh_quotient(const RadialProfile& p, double alpha, int n) {
  require_profile(p);
  require(n >= 2 && std::isfinite(alpha) && alpha >= 0, ErrorCode::Domain, "alpha must be >= 0 and n >= 2");
  if (n == 2) require(alpha == 0.0, ErrorCode::Domain, "for n = 2 only alpha = 0 is admissible");
  require(alpha > 0 || n == 2, ErrorCode::Domain, "alpha = 0 with n >= 3 is outside the energy space");
  const double hmax = sup_norm(p.h);
  require(std::abs(p.h.back()) <= 1e-10 * hmax, ErrorCode::InvalidArgument, "profile must vanish at R");
  const RadialForms f = assemble_radial(alpha, n, p.rho);
  const std::vector<double> x(p.h.begin(), p.h.end() - 1);
  const double den = f.mass.quad(x);
  require(den > 0, ErrorCode::InvalidArgument, "Rayleigh quotient denominator is zero");
  return f.energy.quad(x) / den;
}

EigenResult radial_eigen_min(double alpha, int n, double R, const MeshSpec& mesh) {
  require_admissible(alpha, n);
  const MeshSpec m = resolve(mesh, alpha, n);
  const std::vector<double> rho = graded_mesh(R, m.M, m.grading);
  const RadialForms f = assemble_radial(alpha, n, rho);
  const size_t dim = rho.size() - 1;
  std::vector<double> x(dim), y;
  for (size_t i = 0; i < dim; ++i) x[i] = 1.0 - rho[i] / R;
  double mu = f.energy.quad(x) / f.mass.quad(x);
  EigenResult out;
  int it = 0;
  for (; it < 2000; ++it) {
    f.mass.apply(x, y);
    x = f.energy.solve_spd(y);
    const double scale = sup_norm(x);
    for (double& v : x) v /= scale;
    const double next = f.energy.quad(x) / f.mass.quad(x);
    const bool done = it > 2 && std::abs(next - mu) <= 1e-12 * std::abs(next);
    mu = next;
    if (done) break;
  }
  if (it >= 2000) fail(ErrorCode::NoConvergence, "inverse iteration did not converge");
  double sum = 0.0;
  for (double v : x) sum += v;
  const double sign = sum < 0 ? -1.0 : 1.0;
  out.mu = mu;
  out.iterations = it + 1;
  out.minimizer.R = R;
  out.minimizer.grading = m.grading;
  out.minimizer.rho = rho;
  out.minimizer.h.resize(rho.size());
  for (size_t i = 0; i < dim; ++i) out.minimizer.h[i] = std::max(0.0, sign * x[i]);
  out.minimizer.h.back() = 0.0;
  return out;
}

BpvReport verify_bpv_grid(const GridFunction& u, const NormSpec& spec, double alpha, double domain_volume,
                          double slack_constant) {
  validate(u);
  require(spec.n == u.n, ErrorCode::InvalidArgument, "norm dimension does not match the grid");
  const int n = u.n;
  require(std::isfinite(alpha) && alpha >= 0, ErrorCode::Domain, "alpha must be >= 0");
  if (n == 2)
    require(alpha == 0.0, ErrorCode::Domain, "for n = 2 only alpha = 0 is admissible");
  else
    require(alpha <= 0.5 * (n - 2), ErrorCode::Domain, "alpha must not exceed (n-2)/2");
  const double vol = unit_ball_volume(spec).value;
  require(std::abs(vol / omega(n) - 1.0) <= 1e-6, ErrorCode::InvalidArgument,
          "norm spec must be normalized (unit ball volume omega_n); apply normalize first");
  require(boundary_vanishing(u), ErrorCode::InvalidArgument, "grid function must vanish on the lattice boundary");

  const Norm norm(spec);
  BpvReport r;
  r.uniformity = n == 2 ? 1.0 : uniformity_constant(spec, 1000);
  r.alpha_upper = 0.5 * (n - 2);
  r.alpha_lower = 0.5 * (n - 2) * std::sqrt(std::max(0.0, 1.0 - r.uniformity * r.uniformity));
  r.below_admissible_range = alpha < r.alpha_lower - 1e-12;
  r.sharp_constant = sharp_constant(alpha, n, domain_volume);
  r.lhs = discrete_dirichlet(u, norm);
  const double c = hardy_coefficient(alpha, n);
  r.hardy_term = c == 0.0 ? 0.0 : c * discrete_hardy(u, norm);
  r.poincare_term = r.sharp_constant * discrete_mass(u);
  r.margin = r.lhs - r.hardy_term - r.poincare_term;
  r.slack = slack_constant * u.h;
  r.scale = r.lhs;
  r.pass = r.margin >= -r.slack * r.scale;
  return r;
}

}  // namespace bpv
