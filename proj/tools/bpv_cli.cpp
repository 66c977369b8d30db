// Command-line front end. Talks to the library only through bpv.h.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bpv/bpv.h"

namespace {

using json = nlohmann::ordered_json;

// Library failure carried up to main; usage-type statuses exit with 2.
struct Failure {
  bpv_status status;
  std::string message;
};

void check(bpv_status s) {
  if (s != BPV_OK) throw Failure{s, bpv_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using NormPtr = std::unique_ptr<bpv_norm, Deleter<bpv_norm, bpv_norm_free>>;
using GridPtr = std::unique_ptr<bpv_grid, Deleter<bpv_grid, bpv_grid_free>>;
using ProfilePtr = std::unique_ptr<bpv_profile, Deleter<bpv_profile, bpv_profile_free>>;
using VProfilePtr = std::unique_ptr<bpv_vprofile, Deleter<bpv_vprofile, bpv_vprofile_free>>;

std::string take(char* s) {
  std::string out = s ? s : "";
  bpv_string_free(s);
  return out;
}

struct Options {
  std::string output;
  std::string format;  // empty: subcommand default
  std::uint64_t seed = 0;
  std::string norm_file;
  std::string input;
  std::string output_grid;
  std::string profile = "euclid";
  double alpha = 0.0;
  int n = 2;
  double p = 4.0;
  double lambda = 0.0;
  double R = 1.0;
  double r = 1.0;
  double volume = 0.0;  // 0: omega_n
  double grading = 0.0;
  double slack = 10.0;
  int M = 2000;
  int K = 1;
  int count = 5;
  std::vector<double> t;
  bool derivative = false;
};

// Insertion-ordered keys, so equal runs give equal bytes.
std::string render_json(const json& config, const json& result) {
  json doc;
  doc["config"] = config;
  doc["result"] = result;
  return doc.dump(2) + "\n";
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_header(const json& config) {
  std::string out;
  for (auto it = config.begin(); it != config.end(); ++it) out += "# " + it.key() + "=" + it.value().dump() + "\n";
  return out;
}

// Flat result as key,value rows.
std::string csv_pairs(const json& config, const json& result) {
  std::string out = csv_header(config) + "key,value\n";
  for (auto it = result.begin(); it != result.end(); ++it) {
    if (it.value().is_structured()) continue;
    out += it.key() + "," + (it.value().is_number_float() ? csv_number(it.value().get<double>()) : it.value().dump()) + "\n";
  }
  return out;
}

std::string csv_profile(const json& config, const bpv_profile* prof) {
  const double *rho, *h;
  size_t count;
  check(bpv_profile_data(prof, &rho, &h, &count));
  std::string out = csv_header(config) + "rho,h\n";
  for (size_t i = 0; i < count; ++i) out += csv_number(rho[i]) + "," + csv_number(h[i]) + "\n";
  return out;
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty() || o.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(o.output, std::ios::binary);
  if (!f) throw Failure{BPV_IO, "cannot open output file " + o.output};
  f << text;
  if (!f) throw Failure{BPV_IO, "failed writing " + o.output};
}

double omega_n(int n) {
  double w;
  check(bpv_omega(n, &w));
  return w;
}

json base_config(const std::string& name, const Options& o, const std::string& format) {
  json c;
  c["subcommand"] = name;
  c["format"] = format;
  c["seed"] = o.seed;
  return c;
}

NormPtr load_norm(const Options& o, int n_default) {
  bpv_norm* raw = nullptr;
  if (o.norm_file.empty())
    check(bpv_norm_euclidean(n_default, &raw));
  else
    check(bpv_norm_read_file(o.norm_file.c_str(), &raw));
  return NormPtr(raw);
}

json norm_json(const bpv_norm* norm) {
  char* s = nullptr;
  check(bpv_norm_to_json(norm, &s));
  return json::parse(take(s));
}

int run_bessel(const Options& o, const std::string& fmt) {
  json c = base_config("bessel", o, fmt);
  c["alpha"] = o.alpha;
  c["t"] = o.t;
  c["derivative"] = o.derivative;
  json rows = json::array();
  std::string csv = csv_header(c) + (o.derivative ? "t,dJ\n" : "t,J\n");
  for (double t : o.t) {
    double v;
    check(o.derivative ? bpv_bessel_j_prime(o.alpha, t, &v) : bpv_bessel_j(o.alpha, t, &v));
    rows.push_back({{"t", t}, {"value", v}});
    csv += csv_number(t) + "," + csv_number(v) + "\n";
  }
  json r;
  r["values"] = rows;
  emit(o, fmt == "csv" ? csv : render_json(c, r));
  return 0;
}

int run_zeros(const Options& o, const std::string& fmt) {
  json c = base_config("zeros", o, fmt);
  c["alpha"] = o.alpha;
  c["count"] = o.count;
  if (o.count < 1 || o.count > 100000) throw Failure{BPV_INVALID_ARGUMENT, "--count must lie in [1, 100000]"};
  std::vector<double> z(o.count);
  check(bpv_zero_table(o.alpha, o.count, z.data()));
  json r;
  r["zeros"] = z;
  r["residual_tolerance"] = 1e-11;
  std::string csv = csv_header(c) + "k,zero\n";
  for (int k = 0; k < o.count; ++k) csv += std::to_string(k + 1) + "," + csv_number(z[k]) + "\n";
  emit(o, fmt == "csv" ? csv : render_json(c, r));
  return 0;
}

int run_sharp_constant(const Options& o, const std::string& fmt) {
  const double vol = o.volume > 0 ? o.volume : omega_n(o.n);
  json c = base_config("sharp-constant", o, fmt);
  c["alpha"] = o.alpha;
  c["n"] = o.n;
  c["volume"] = vol;
  double S, j;
  check(bpv_sharp_constant(o.alpha, o.n, vol, &S));
  check(bpv_bessel_zero(o.alpha, 1, &j));
  json r;
  r["sharp_constant"] = S;
  r["j_alpha"] = j;
  r["j_alpha_squared"] = j * j;
  r["hardy_coefficient"] = (o.n - 2) * (o.n - 2) / 4.0 - o.alpha * o.alpha;
  emit(o, fmt == "csv" ? csv_pairs(c, r) : render_json(c, r));
  return 0;
}

double sup_abs(const bpv_profile* prof) {
  const double *rho, *h;
  size_t count;
  check(bpv_profile_data(prof, &rho, &h, &count));
  double m = 0.0;
  for (size_t i = 0; i < count; ++i) m = std::max(m, std::abs(h[i]));
  return m;
}

int run_extremal(const Options& o, const std::string& fmt) {
  json c = base_config("extremal", o, fmt);
  c["alpha"] = o.alpha;
  c["n"] = o.n;
  c["R"] = o.R;
  c["mesh"] = o.M;
  bpv_profile* raw = nullptr;
  check(bpv_extremal_profile(o.alpha, o.n, o.R, o.M, o.grading, &raw));
  ProfilePtr prof(raw);
  double grading, j, origin, el, rq;
  check(bpv_profile_grading(prof.get(), &grading));
  c["grading"] = grading;
  check(bpv_bessel_zero(o.alpha, 1, &j));
  const double Q = j * j / (o.R * o.R);
  check(bpv_extremal_origin_constant(o.alpha, o.n, o.R, &origin));
  check(bpv_euler_lagrange_residual(prof.get(), o.alpha, o.n, Q, &el));
  check(bpv_radial_rayleigh_quotient(prof.get(), o.alpha, o.n, &rq));
  const double amp = sup_abs(prof.get());
  json r;
  r["Q"] = Q;
  r["origin_constant"] = origin;
  r["sup_norm"] = amp;
  r["euler_lagrange_residual"] = el;
  r["relative_residual"] = amp > 0 ? el / amp : el;
  r["residual_tolerance"] = 1e-6;
  r["rayleigh_quotient"] = rq;
  emit(o, fmt == "csv" ? csv_profile(c, prof.get()) : render_json(c, r));
  return 0;
}

int run_eigen(const Options& o, const std::string& fmt) {
  json c = base_config("eigen", o, fmt);
  c["alpha"] = o.alpha;
  c["n"] = o.n;
  c["R"] = o.R;
  c["mesh"] = o.M;
  double mu, j;
  int it;
  bpv_profile* raw = nullptr;
  check(bpv_radial_eigen_min(o.alpha, o.n, o.R, o.M, o.grading, &mu, &it, &raw));
  ProfilePtr prof(raw);
  double grading;
  check(bpv_profile_grading(prof.get(), &grading));
  c["grading"] = grading;
  check(bpv_bessel_zero(o.alpha, 1, &j));
  const double target = j * j / (o.R * o.R);
  json r;
  r["mu"] = mu;
  r["sharp_value"] = target;
  r["relative_error"] = std::abs(mu / target - 1);
  r["tolerance"] = 1e-3;
  r["iterations"] = it;
  emit(o, fmt == "csv" ? csv_profile(c, prof.get()) : render_json(c, r));
  return 0;
}

GridPtr load_grid(const Options& o) {
  if (o.input.empty()) throw Failure{BPV_INVALID_ARGUMENT, "--input <grid file> is required"};
  bpv_grid* raw = nullptr;
  check(bpv_grid_read_file(o.input.c_str(), &raw));
  return GridPtr(raw);
}

int run_rearrange(const Options& o, const std::string& fmt) {
  GridPtr grid = load_grid(o);
  int n;
  check(bpv_grid_dim(grid.get(), &n));
  NormPtr norm = load_norm(o, n);
  json c = base_config("rearrange", o, fmt);
  c["input"] = o.input;
  c["norm"] = norm_json(norm.get());
  c["slack_constant"] = o.slack;
  c["output_grid"] = o.output_grid;
  bpv_rearrange_report rep;
  check(bpv_rearrange_report_run(grid.get(), norm.get(), o.slack, &rep));
  if (!o.output_grid.empty()) {
    bpv_grid* raw = nullptr;
    check(bpv_symmetrize(grid.get(), norm.get(), &raw));
    GridPtr sym(raw);
    check(bpv_grid_write_file(sym.get(), o.output_grid.c_str()));
  }
  json r;
  r["mass_in"] = rep.mass_in;
  r["mass_out"] = rep.mass_out;
  r["hardy_in"] = rep.hardy_in;
  r["hardy_out"] = rep.hardy_out;
  r["dirichlet_in"] = rep.dirichlet_in;
  r["dirichlet_out"] = rep.dirichlet_out;
  r["slack"] = rep.slack;
  r["cavalieri"] = rep.cavalieri != 0;
  r["hardy_littlewood"] = rep.hardy_littlewood != 0;
  r["polya_szego"] = rep.polya_szego != 0;
  emit(o, fmt == "csv" ? csv_pairs(c, r) : render_json(c, r));
  return 0;
}

int run_verify_bpv(const Options& o, const std::string& fmt) {
  GridPtr grid = load_grid(o);
  int n;
  check(bpv_grid_dim(grid.get(), &n));
  NormPtr norm = load_norm(o, n);
  const double vol = o.volume > 0 ? o.volume : omega_n(n);
  json c = base_config("verify-bpv", o, fmt);
  c["input"] = o.input;
  c["norm"] = norm_json(norm.get());
  c["alpha"] = o.alpha;
  c["volume"] = vol;
  c["slack_constant"] = o.slack;
  bpv_bpv_report rep;
  check(bpv_verify_bpv_grid(grid.get(), norm.get(), o.alpha, vol, o.slack, &rep));
  json r;
  r["lhs"] = rep.lhs;
  r["hardy_term"] = rep.hardy_term;
  r["poincare_term"] = rep.poincare_term;
  r["margin"] = rep.margin;
  r["sharp_constant"] = rep.sharp_constant;
  r["slack"] = rep.slack;
  r["scale"] = rep.scale;
  r["pass"] = rep.pass != 0;
  r["below_admissible_range"] = rep.below_admissible_range != 0;
  r["uniformity"] = rep.uniformity;
  r["alpha_lower"] = rep.alpha_lower;
  r["alpha_upper"] = rep.alpha_upper;
  emit(o, fmt == "csv" ? csv_pairs(c, r) : render_json(c, r));
  return rep.pass ? 0 : 1;
}

int run_rigidity(const Options& o, const std::string& fmt) {
  bpv_vprofile* raw = nullptr;
  check(bpv_vprofile_parse(o.n, o.profile.c_str(), &raw));
  VProfilePtr vp(raw);
  char* desc = nullptr;
  check(bpv_vprofile_describe(vp.get(), &desc));
  json c = base_config("rigidity", o, fmt);
  c["profile"] = take(desc);
  c["alpha"] = o.alpha;
  c["n"] = o.n;
  c["r"] = o.r;
  double identity;
  bpv_h_alpha_zero z;
  check(bpv_integral_identity(o.alpha, o.n, &identity));
  check(bpv_h_alpha_zero_find(o.alpha, o.n, &z));
  json r;
  json checks;
  checks["integral_identity"] = identity;
  checks["identity_tolerance"] = 1e-8;
  checks["sign_changes"] = z.sign_changes;
  bpv_verdict_report v;
  const bpv_status st = bpv_rigidity_verdict(vp.get(), o.alpha, o.n, o.r, &v);
  if (st == BPV_INVALID_ARGUMENT) {
    // Profiles outside the verdict's hypotheses still get the functional.
    const std::string why = bpv_last_error();
    double I;
    check(bpv_rigidity_functional(vp.get(), o.alpha, o.n, o.r, &I));
    r["I"] = I;
    r["t0"] = z.t0;
    r["verdict"] = nullptr;
    checks["verdict_rejected"] = why;
  } else {
    check(st);
    r["I"] = v.functional;
    r["t0"] = v.t0;
    r["verdict"] = v.verdict == BPV_VERDICT_FLAT ? "Flat" : "BpvViolated";
    checks["tolerance"] = v.tolerance;
    checks["max_ratio_deviation"] = v.max_deviation;
  }
  r["checks"] = checks;
  emit(o, fmt == "csv" ? csv_pairs(c, r) : render_json(c, r));
  return 0;
}

int run_pde(const Options& o, const std::string& fmt) {
  json c = base_config("pde", o, fmt);
  c["alpha"] = o.alpha;
  c["n"] = o.n;
  c["p"] = o.p;
  c["lambda"] = o.lambda;
  c["mesh"] = o.M;
  c["attempts"] = o.K;
  const bpv_pde_problem prob{o.alpha, o.n, o.p, o.lambda};
  bpv_pde_result res;
  bpv_profile* raw = nullptr;
  check(bpv_pde_solve(&prob, o.M, o.grading, o.K, o.seed, &res, &raw));
  ProfilePtr prof(raw);
  double grading, j;
  check(bpv_profile_grading(prof.get(), &grading));
  c["grading"] = grading;
  check(bpv_bessel_zero(o.alpha, 1, &j));
  const double amp = sup_abs(prof.get());
  json r;
  r["threshold"] = -j * j;
  r["nonzero"] = res.nonzero != 0;
  r["inconclusive"] = res.inconclusive != 0;
  r["status"] = res.status;
  r["sup_norm"] = amp;
  r["energy"] = res.energy;
  r["residual"] = res.residual;
  r["residual_tolerance"] = 1e-5 * amp;
  r["attempts"] = res.attempts;
  r["converged_attempts"] = res.converged_attempts;
  r["collapsed_attempts"] = res.collapsed_attempts;
  if (res.nonzero) {
    bpv_necessity nec;
    check(bpv_necessity_identity(&prob, prof.get(), &nec));
    r["necessity_lhs"] = nec.lhs;
    r["necessity_rhs"] = nec.rhs;
    r["necessity_relative_error"] = nec.relative_error;
  }
  emit(o, fmt == "csv" ? csv_profile(c, prof.get()) : render_json(c, r));
  return res.inconclusive ? 1 : 0;
}

int run_selftest(const Options& o, const std::string& fmt) {
  if (fmt == "csv") throw Failure{BPV_INVALID_ARGUMENT, "selftest only writes JSON"};
  int pass = 0;
  char* report = nullptr;
  check(bpv_selftest(o.seed, &pass, &report));
  emit(o, take(report));
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sharp Hardy-Poincare constants, extremals, rearrangements, rigidity and the radial threshold PDE"};
  app.require_subcommand(1);
  Options o;
  std::string seed_flag;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", o.output, "Output file (default stdout)");
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", o.seed, "Seed (BPV_SEED overrides)");
  };
  auto alpha_n = [&](CLI::App* sub) {
    sub->add_option("--alpha", o.alpha, "Order alpha");
    sub->add_option("--n", o.n, "Dimension n")->check(CLI::Range(2, 64));
  };

  auto* bessel = app.add_subcommand("bessel", "Evaluate J_alpha(t)");
  bessel->add_option("--alpha", o.alpha, "Order")->required();
  bessel->add_option("--t", o.t, "Arguments")->required();
  bessel->add_flag("--derivative", o.derivative, "Evaluate J'_alpha instead");
  common(bessel);

  auto* zeros = app.add_subcommand("zeros", "Positive zeros of J_alpha");
  zeros->add_option("--alpha", o.alpha, "Order")->required();
  zeros->add_option("--count", o.count, "Number of zeros");
  common(zeros);

  auto* sharp = app.add_subcommand("sharp-constant", "j_alpha^2 (omega_n/volume)^{2/n}");
  alpha_n(sharp);
  sharp->add_option("--volume", o.volume, "Domain volume (default omega_n)");
  common(sharp);

  auto* extremal = app.add_subcommand("extremal", "Extremal radial profile on the Wulff ball of radius R");
  alpha_n(extremal);
  extremal->add_option("--R", o.R, "Radius");
  extremal->add_option("--mesh", o.M, "Mesh size M");
  extremal->add_option("--grading", o.grading, "Mesh grading (default by case)");
  common(extremal);

  auto* eigen = app.add_subcommand("eigen", "Smallest radial Rayleigh quotient");
  alpha_n(eigen);
  eigen->add_option("--R", o.R, "Radius");
  eigen->add_option("--mesh", o.M, "Mesh size M");
  eigen->add_option("--grading", o.grading, "Mesh grading (default by case)");
  common(eigen);

  auto* rearrange = app.add_subcommand("rearrange", "Anisotropic symmetrization of a grid function");
  rearrange->add_option("--input", o.input, "Grid file")->required();
  rearrange->add_option("--norm", o.norm_file, "Norm JSON (default Euclidean)");
  rearrange->add_option("--output-grid", o.output_grid, "Write the rearranged grid here");
  rearrange->add_option("--slack", o.slack, "Constant C in eps_h = C h");
  common(rearrange);

  auto* verify = app.add_subcommand("verify-bpv", "Check the inequality on a grid function");
  verify->add_option("--input", o.input, "Grid file")->required();
  verify->add_option("--norm", o.norm_file, "Norm JSON (default Euclidean)");
  verify->add_option("--alpha", o.alpha, "Order alpha");
  verify->add_option("--volume", o.volume, "Domain volume (default omega_n)");
  verify->add_option("--slack", o.slack, "Constant C in eps_h = C h");
  common(verify);

  auto* rigidity = app.add_subcommand("rigidity", "Rigidity functional of a ball volume profile");
  rigidity->add_option("--profile", o.profile,
                       "euclid | scaled:c | table:<file> | sphere:R | deficit-linear:a:s | deficit-power:a:s:k | "
                       "deficit-step:a:s");
  alpha_n(rigidity);
  rigidity->add_option("--r", o.r, "Radius r");
  common(rigidity);

  auto* pde = app.add_subcommand("pde", "Radial solutions of the threshold problem on the unit ball");
  alpha_n(pde);
  pde->add_option("--p", o.p, "Exponent p");
  pde->add_option("--lambda", o.lambda, "lambda");
  pde->add_option("--mesh", o.M, "Mesh size M");
  pde->add_option("--grading", o.grading, "Mesh grading (default by case)");
  pde->add_option("--attempts", o.K, "Multistart attempts K");
  common(pde);

  auto* selftest = app.add_subcommand("selftest", "Run the invariant suite");
  common(selftest);

  // The pde default mesh differs from the profile commands.
  pde->preparse_callback([&](size_t) { o.M = 4000; });

  CLI11_PARSE(app, argc, argv);

  if (const char* env = std::getenv("BPV_SEED")) {
    try {
      size_t used = 0;
      o.seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument(env);
    } catch (const std::exception&) {
      std::cerr << "error: BPV_SEED must be a nonnegative integer\n";
      return 2;
    }
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    const std::string fmt = !o.format.empty() ? o.format : (name == "zeros" ? "csv" : "json");
    if (name == "bessel") return run_bessel(o, fmt);
    if (name == "zeros") return run_zeros(o, fmt);
    if (name == "sharp-constant") return run_sharp_constant(o, fmt);
    if (name == "extremal") return run_extremal(o, fmt);
    if (name == "eigen") return run_eigen(o, fmt);
    if (name == "rearrange") return run_rearrange(o, fmt);
    if (name == "verify-bpv") return run_verify_bpv(o, fmt);
    if (name == "rigidity") return run_rigidity(o, fmt);
    if (name == "pde") return run_pde(o, fmt);
    if (name == "selftest") return run_selftest(o, fmt);
  } catch (const Failure& f) {
    std::cerr << "error: " << bpv_status_name(f.status) << ": " << f.message << "\n";
    const bool usage = f.status == BPV_INVALID_ARGUMENT || f.status == BPV_DOMAIN || f.status == BPV_PARSE;
    return usage ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
