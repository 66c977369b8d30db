#include "bpv/bpv.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "bpv/error.hpp"
#include "bpv/grid.hpp"
#include "bpv/norm.hpp"
#include "bpv/pde.hpp"
#include "bpv/rearrange.hpp"
#include "bpv/rigidity.hpp"
#include "bpv/selftest.hpp"
#include "bpv/specfun.hpp"
#include "bpv/spectrum.hpp"

struct bpv_norm {
  bpv::NormSpec spec;
  bpv::Norm norm;
  explicit bpv_norm(const bpv::NormSpec& s) : spec(s), norm(s) {}
};

struct bpv_grid {
  bpv::GridFunction g;
};

struct bpv_profile {
  bpv::RadialProfile p;
};

struct bpv_vprofile {
  bpv::VolumeProfile vp;
};

namespace {

thread_local std::string last_error;

bpv_status to_status(bpv::ErrorCode code) {
  return static_cast<bpv_status>(static_cast<int>(code));
}

template <class F>
bpv_status guard(F body) {
  try {
    body();
    last_error.clear();
    return BPV_OK;
  } catch (const bpv::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return BPV_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return BPV_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return BPV_INTERNAL;
  }
}

template <class... P>
void need(const P*... ptrs) {
  if (((ptrs == nullptr) || ...)) bpv::fail(bpv::ErrorCode::InvalidArgument, "null pointer argument");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bpv::MeshSpec mesh(int M, double grading) {
  bpv::MeshSpec m;
  m.M = M;
  m.grading = grading > 0 ? grading : 0.0;
  return m;
}

bpv::PdeProblem problem(const bpv_pde_problem* p) { return {p->alpha, p->n, p->p, p->lambda}; }

std::vector<double> matrix_or_identity(int n, const double* matrix) {
  if (!matrix) return {};
  bpv::require(n >= 1 && n <= 64, bpv::ErrorCode::Domain, "dimension out of range");
  return std::vector<double>(matrix, matrix + static_cast<size_t>(n) * n);
}

}  // namespace

extern "C" {

const char* bpv_version(void) { return "0.1.0"; }

const char* bpv_last_error(void) { return last_error.c_str(); }

const char* bpv_status_name(bpv_status status) {
  switch (status) {
    case BPV_OK: return "ok";
    case BPV_INVALID_ARGUMENT: return "invalid argument";
    case BPV_DOMAIN: return "domain error";
    case BPV_NO_CONVERGENCE: return "no convergence";
    case BPV_PARSE: return "parse error";
    case BPV_IO: return "i/o error";
    case BPV_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void bpv_string_free(char* s) { std::free(s); }

bpv_status bpv_bessel_j(double order, double t, double* out) {
  return guard([&] { need(out); *out = bpv::bessel_j(order, t); });
}

bpv_status bpv_bessel_j_prime(double order, double t, double* out) {
  return guard([&] { need(out); *out = bpv::bessel_j_prime(order, t); });
}

bpv_status bpv_bessel_zero(double order, int k, double* out) {
  return guard([&] { need(out); *out = bpv::bessel_zero(order, k); });
}

bpv_status bpv_zero_table(double order, int count, double* out) {
  return guard([&] {
    need(out);
    const bpv::ZeroTable t = bpv::zero_table(order, count);
    std::copy(t.zeros.begin(), t.zeros.end(), out);
  });
}

bpv_status bpv_rayleigh_sum(double order, int K, bpv_rayleigh* out) {
  return guard([&] {
    need(out);
    const bpv::RayleighSum r = bpv::rayleigh_sum(order, K);
    *out = {r.partial, r.tail, r.extrapolated, r.tail_bound};
  });
}

bpv_status bpv_mittag_leffler_ratio(double order, double t, int K, bpv_mittag_leffler* out) {
  return guard([&] {
    need(out);
    const bpv::MittagLeffler m = bpv::mittag_leffler_ratio(order, t, K);
    *out = {m.value, m.partial, m.tail, m.tail_bound, m.terms};
  });
}

bpv_status bpv_omega(int n, double* out) {
  return guard([&] { need(out); *out = bpv::omega(n); });
}

bpv_status bpv_norm_euclidean(int n, bpv_norm** out) {
  return guard([&] { need(out); *out = new bpv_norm(bpv::euclidean_norm(n)); });
}

bpv_status bpv_norm_lp(int n, double p, double kappa, bpv_norm** out) {
  return guard([&] { need(out); *out = new bpv_norm(bpv::lp_norm(n, p, kappa)); });
}

bpv_status bpv_norm_quadratic(int n, const double* matrix, double kappa, bpv_norm** out) {
  return guard([&] { need(out); *out = new bpv_norm(bpv::quadratic_norm(n, matrix_or_identity(n, matrix), kappa)); });
}

bpv_status bpv_norm_mix(int n, double p, const double* matrix, double w_lp, double kappa, bpv_norm** out) {
  return guard([&] {
    need(out);
    *out = new bpv_norm(bpv::mix_norm(n, p, matrix_or_identity(n, matrix), w_lp, kappa));
  });
}

bpv_status bpv_norm_from_json(const char* text, bpv_norm** out) {
  return guard([&] { need(text, out); *out = new bpv_norm(bpv::norm_from_json(text)); });
}

bpv_status bpv_norm_read_file(const char* path, bpv_norm** out) {
  return guard([&] { need(path, out); *out = new bpv_norm(bpv::read_norm_file(path)); });
}

bpv_status bpv_norm_to_json(const bpv_norm* norm, char** out) {
  return guard([&] { need(norm, out); *out = dup(bpv::norm_to_json(norm->spec)); });
}

void bpv_norm_free(bpv_norm* norm) { delete norm; }

bpv_status bpv_norm_dim(const bpv_norm* norm, int* out) {
  return guard([&] { need(norm, out); *out = norm->spec.n; });
}

bpv_status bpv_norm_eval(const bpv_norm* norm, const double* x, double* out) {
  return guard([&] { need(norm, x, out); *out = norm->norm.eval(x); });
}

bpv_status bpv_norm_polar(const bpv_norm* norm, const double* xi, double* out) {
  return guard([&] { need(norm, xi, out); *out = norm->norm.polar(xi); });
}

bpv_status bpv_norm_unit_ball_volume(const bpv_norm* norm, double* value, double* error) {
  return guard([&] {
    need(norm, value);
    const bpv::VolumeEstimate v = bpv::unit_ball_volume(norm->spec);
    *value = v.value;
    if (error) *error = v.error;
  });
}

bpv_status bpv_norm_normalize(const bpv_norm* norm, bpv_norm** out) {
  return guard([&] { need(norm, out); *out = new bpv_norm(bpv::normalize(norm->spec)); });
}

bpv_status bpv_norm_uniformity(const bpv_norm* norm, int sample_budget, double* out) {
  return guard([&] { need(norm, out); *out = bpv::uniformity_constant(norm->spec, sample_budget); });
}

bpv_status bpv_grid_centered(int n, const int* shape, double h, bpv_grid** out) {
  return guard([&] {
    need(shape, out);
    bpv::require(n >= 1 && n <= 16, bpv::ErrorCode::Domain, "grid dimension out of range");
    *out = new bpv_grid{bpv::centered_grid(n, std::vector<int>(shape, shape + n), h)};
  });
}

bpv_status bpv_grid_parse(const char* text, bpv_grid** out) {
  return guard([&] { need(text, out); *out = new bpv_grid{bpv::parse_grid(text)}; });
}

bpv_status bpv_grid_read_file(const char* path, bpv_grid** out) {
  return guard([&] { need(path, out); *out = new bpv_grid{bpv::read_grid_file(path)}; });
}

bpv_status bpv_grid_write_file(const bpv_grid* grid, const char* path) {
  return guard([&] { need(grid, path); bpv::write_grid_file(grid->g, path); });
}

bpv_status bpv_grid_format(const bpv_grid* grid, char** out) {
  return guard([&] { need(grid, out); *out = dup(bpv::format_grid(grid->g)); });
}

void bpv_grid_free(bpv_grid* grid) { delete grid; }

bpv_status bpv_grid_dim(const bpv_grid* grid, int* out) {
  return guard([&] { need(grid, out); *out = grid->g.n; });
}

bpv_status bpv_grid_spacing(const bpv_grid* grid, double* out) {
  return guard([&] { need(grid, out); *out = grid->g.h; });
}

bpv_status bpv_grid_shape(const bpv_grid* grid, int* shape) {
  return guard([&] { need(grid, shape); std::copy(grid->g.shape.begin(), grid->g.shape.end(), shape); });
}

bpv_status bpv_grid_values(bpv_grid* grid, double** values, size_t* count) {
  return guard([&] {
    need(grid, values, count);
    *values = grid->g.values.data();
    *count = grid->g.values.size();
  });
}

bpv_status bpv_grid_center(const bpv_grid* grid, size_t flat, double* x) {
  return guard([&] {
    need(grid, x);
    bpv::require(flat < grid->g.size(), bpv::ErrorCode::InvalidArgument, "cell index out of range");
    grid->g.center(flat, x);
  });
}

bpv_status bpv_symmetrize(const bpv_grid* grid, const bpv_norm* norm, bpv_grid** out) {
  return guard([&] { need(grid, norm, out); *out = new bpv_grid{bpv::symmetrize(grid->g, norm->spec)}; });
}

bpv_status bpv_rearrange_report_run(const bpv_grid* grid, const bpv_norm* norm, double slack_constant,
                                    bpv_rearrange_report* out) {
  return guard([&] {
    need(grid, norm, out);
    const bpv::RearrangeReport r = bpv::rearrange_report(grid->g, norm->spec, slack_constant);
    *out = {r.mass_in,   r.mass_out,   r.hardy_in,         r.hardy_out,  r.dirichlet_in,
            r.dirichlet_out, r.slack, r.cavalieri, r.hardy_littlewood, r.polya_szego};
  });
}

bpv_status bpv_discrete_mass(const bpv_grid* grid, double* out) {
  return guard([&] { need(grid, out); *out = bpv::discrete_mass(grid->g); });
}

bpv_status bpv_discrete_hardy(const bpv_grid* grid, const bpv_norm* norm, double* out) {
  return guard([&] { need(grid, norm, out); *out = bpv::discrete_hardy(grid->g, norm->norm); });
}

bpv_status bpv_discrete_dirichlet(const bpv_grid* grid, const bpv_norm* norm, double* out) {
  return guard([&] { need(grid, norm, out); *out = bpv::discrete_dirichlet(grid->g, norm->norm); });
}

bpv_status bpv_hardy_inequality_check(const bpv_grid* grid, const bpv_norm* norm, double* out) {
  return guard([&] { need(grid, norm, out); *out = bpv::hardy_inequality_check(grid->g, norm->spec); });
}

bpv_status bpv_profile_create(const double* rho, const double* h, size_t count, bpv_profile** out) {
  return guard([&] {
    need(rho, h, out);
    bpv::RadialProfile p;
    p.rho.assign(rho, rho + count);
    p.h.assign(h, h + count);
    p.R = count ? p.rho.back() : 0.0;
    p.grading = 0.0;
    *out = new bpv_profile{std::move(p)};
  });
}

void bpv_profile_free(bpv_profile* profile) { delete profile; }

bpv_status bpv_profile_data(const bpv_profile* profile, const double** rho, const double** h, size_t* count) {
  return guard([&] {
    need(profile, rho, h, count);
    *rho = profile->p.rho.data();
    *h = profile->p.h.data();
    *count = profile->p.rho.size();
  });
}

bpv_status bpv_profile_grading(const bpv_profile* profile, double* out) {
  return guard([&] { need(profile, out); *out = profile->p.grading; });
}

bpv_status bpv_sharp_constant(double alpha, int n, double volume, double* out) {
  return guard([&] { need(out); *out = bpv::sharp_constant(alpha, n, volume); });
}

bpv_status bpv_extremal_profile(double alpha, int n, double R, int M, double grading, bpv_profile** out) {
  return guard([&] { need(out); *out = new bpv_profile{bpv::extremal_profile(alpha, n, R, mesh(M, grading))}; });
}

bpv_status bpv_extremal_origin_constant(double alpha, int n, double R, double* out) {
  return guard([&] { need(out); *out = bpv::extremal_origin_constant(alpha, n, R); });
}

bpv_status bpv_euler_lagrange_residual(const bpv_profile* profile, double alpha, int n, double Q, double* out) {
  return guard([&] { need(profile, out); *out = bpv::euler_lagrange_residual(profile->p, alpha, n, Q); });
}

bpv_status bpv_radial_rayleigh_quotient(const bpv_profile* profile, double alpha, int n, double* out) {
  return guard([&] { need(profile, out); *out = bpv::radial_rayleigh_quotient(profile->p, alpha, n); });
}

bpv_status bpv_radial_eigen_min(double alpha, int n, double R, int M, double grading, double* mu, int* iterations,
                                bpv_profile** minimizer) {
  return guard([&] {
    need(mu);
    bpv::EigenResult e = bpv::radial_eigen_min(alpha, n, R, mesh(M, grading));
    *mu = e.mu;
    if (iterations) *iterations = e.iterations;
    if (minimizer) *minimizer = new bpv_profile{std::move(e.minimizer)};
  });
}

bpv_status bpv_verify_bpv_grid(const bpv_grid* grid, const bpv_norm* norm, double alpha, double domain_volume,
                               double slack_constant, bpv_bpv_report* out) {
  return guard([&] {
    need(grid, norm, out);
    const bpv::BpvReport r = bpv::verify_bpv_grid(grid->g, norm->spec, alpha, domain_volume, slack_constant);
    *out = {r.lhs,  r.hardy_term, r.poincare_term, r.margin, r.sharp_constant, r.slack, r.scale,
            r.pass, r.below_admissible_range, r.uniformity, r.alpha_lower, r.alpha_upper};
  });
}

bpv_status bpv_vprofile_parse(int n, const char* text, bpv_vprofile** out) {
  return guard([&] { need(text, out); *out = new bpv_vprofile{bpv::parse_volume_profile(n, text)}; });
}

void bpv_vprofile_free(bpv_vprofile* vp) { delete vp; }

bpv_status bpv_vprofile_describe(const bpv_vprofile* vp, char** out) {
  return guard([&] { need(vp, out); *out = dup(vp->vp.describe()); });
}

bpv_status bpv_vprofile_volume(const bpv_vprofile* vp, double rho, double* out) {
  return guard([&] { need(vp, out); *out = vp->vp.volume(rho); });
}

bpv_status bpv_h_alpha(double alpha, int n, double t, double* out) {
  return guard([&] { need(out); *out = bpv::h_alpha(alpha, n, t); });
}

bpv_status bpv_h_alpha_zero_find(double alpha, int n, bpv_h_alpha_zero* out) {
  return guard([&] {
    need(out);
    const bpv::HAlphaZero z = bpv::h_alpha_zero(alpha, n);
    *out = {z.t0, z.value, z.sign_changes};
  });
}

bpv_status bpv_integral_identity(double alpha, int n, double* out) {
  return guard([&] { need(out); *out = bpv::integral_identity(alpha, n); });
}

bpv_status bpv_monotone_check(int which, double alpha, int n, double beta, double* out) {
  return guard([&] { need(out); *out = bpv::monotone_check(which, alpha, n, beta); });
}

bpv_status bpv_rigidity_functional(const bpv_vprofile* vp, double alpha, int n, double r, double* out) {
  return guard([&] { need(vp, out); *out = bpv::rigidity_functional(vp->vp, alpha, n, r); });
}

bpv_status bpv_rigidity_verdict(const bpv_vprofile* vp, double alpha, int n, double r, bpv_verdict_report* out) {
  return guard([&] {
    need(vp, out);
    const bpv::VerdictReport v = bpv::rigidity_verdict(vp->vp, alpha, n, r);
    out->verdict = v.verdict == bpv::Verdict::Flat ? BPV_VERDICT_FLAT : BPV_VERDICT_BPV_VIOLATED;
    out->functional = v.functional;
    out->tolerance = v.tolerance;
    out->max_deviation = v.max_deviation;
    out->t0 = v.t0;
  });
}

bpv_status bpv_pde_solve(const bpv_pde_problem* prob, int M, double grading, int attempts, uint64_t seed,
                         bpv_pde_result* out, bpv_profile** profile) {
  return guard([&] {
    need(prob, out);
    bpv::PdeSolution s = bpv::solve(problem(prob), mesh(M, grading), attempts, seed);
    out->energy = s.energy;
    out->residual = s.residual;
    out->nonzero = s.nonzero;
    out->inconclusive = s.inconclusive;
    out->attempts = s.attempts;
    out->converged_attempts = s.converged_attempts;
    out->collapsed_attempts = s.collapsed_attempts;
    std::snprintf(out->status, sizeof out->status, "%s", s.status.c_str());
    if (profile) *profile = new bpv_profile{std::move(s.profile)};
  });
}

bpv_status bpv_pde_residual(const bpv_pde_problem* prob, const bpv_profile* h, int nonlinear, double* out) {
  return guard([&] { need(prob, h, out); *out = bpv::radial_residual(problem(prob), h->p, nonlinear != 0); });
}

bpv_status bpv_pde_energy(const bpv_pde_problem* prob, const bpv_profile* h, double* out) {
  return guard([&] { need(prob, h, out); *out = bpv::energy(problem(prob), h->p); });
}

bpv_status bpv_coercivity_constant(const bpv_pde_problem* prob, double lF, double* out) {
  return guard([&] { need(prob, out); *out = bpv::coercivity_constant(problem(prob), lF); });
}

bpv_status bpv_necessity_identity(const bpv_pde_problem* prob, const bpv_profile* u, bpv_necessity* out) {
  return guard([&] {
    need(prob, u, out);
    const bpv::NecessityIdentity r = bpv::necessity_identity(problem(prob), u->p);
    *out = {r.lhs, r.rhs, r.relative_error};
  });
}

bpv_status bpv_nonnegativity_projection(const bpv_profile* h, bpv_profile** out) {
  return guard([&] { need(h, out); *out = new bpv_profile{bpv::nonnegativity_projection(h->p)}; });
}

bpv_status bpv_selftest(uint64_t seed, int* pass, char** report) {
  return guard([&] {
    need(pass);
    const bpv::SelftestResult r = bpv::run_selftest(seed);
    *pass = r.pass;
    if (report) *report = dup(r.report);
  });
}

}  // extern "C"
