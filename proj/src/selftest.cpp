#include "bpv/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include <json.hpp>

#include "bpv/error.hpp"
#include "bpv/pde.hpp"
#include "bpv/rearrange.hpp"
#include "bpv/rigidity.hpp"
#include "bpv/specfun.hpp"
#include "bpv/spectrum.hpp"

namespace bpv {
namespace {

using json = nlohmann::ordered_json;

class Suite {
 public:
  // Records value <= tolerance.
  void at_most(const std::string& name, double value, double tolerance) {
    add(name, value, tolerance, value <= tolerance);
  }
  void holds(const std::string& name, bool ok, double value = 0.0) { add(name, value, 0.0, ok); }

  // Runs body; an exception counts as a failed check with the message attached.
  template <class F>
  void guard(const std::string& name, F body) {
    try {
      body();
    } catch (const std::exception& e) {
      json c;
      c["name"] = name;
      c["pass"] = false;
      c["error"] = e.what();
      checks_.push_back(std::move(c));
      ++failures_;
    }
  }

  SelftestResult finish(std::uint64_t seed) const {
    json doc;
    doc["seed"] = seed;
    doc["checks"] = checks_;
    doc["failures"] = failures_;
    doc["pass"] = failures_ == 0;
    SelftestResult r;
    r.pass = failures_ == 0;
    r.checks = static_cast<int>(checks_.size());
    r.failures = failures_;
    r.report = doc.dump(2) + "\n";
    return r;
  }

 private:
  void add(const std::string& name, double value, double tolerance, bool ok) {
    json c;
    c["name"] = name;
    c["value"] = value;
    c["tolerance"] = tolerance;
    c["pass"] = ok;
    checks_.push_back(std::move(c));
    if (!ok) ++failures_;
  }

  json checks_ = json::array();
  int failures_ = 0;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string tag(double alpha, int n) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "(%g,%d)", alpha, n);
  return buf;
}

// Smooth nonnegative function on [-1,1]^2 vanishing on the lattice boundary.
GridFunction random_grid(int S, std::mt19937_64& rng) {
  GridFunction g = centered_grid(2, {S, S}, 2.0 / S);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double c[3][3];
  for (auto& row : c)
    for (double& v : row) v = U(rng) / 3.0;
  c[0][0] = 1.0;
  double x[2];
  int idx[2];
  for (size_t k = 0; k < g.size(); ++k) {
    g.unflatten(k, idx);
    if (idx[0] == 0 || idx[1] == 0 || idx[0] == S - 1 || idx[1] == S - 1) continue;
    g.center(k, x);
    double v = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        v += c[a][b] * std::sin((a + 1) * M_PI * (x[0] + 1) / 2) * std::sin((b + 1) * M_PI * (x[1] + 1) / 2);
    g.values[k] = std::max(v, 0.0);
  }
  return g;
}

}  // namespace

SelftestResult run_selftest(std::uint64_t seed) {
  Suite s;
  std::mt19937_64 rng(seed);

  s.guard("bessel", [&] {
    const double j0 = bessel_zero(0, 1);
    s.at_most("j_0 vs 2.4048", std::abs(j0 - 2.4048), 5e-5);
    double worst = 0.0;
    for (double a : {0.0, 0.5, 1.0, 1.5, 2.0})
      for (int k = 1; k <= 10; ++k) worst = std::max(worst, std::abs(bessel_j(a, bessel_zero(a, k))));
    s.at_most("zero residuals", worst, 1e-11);
    double rec = 0.0;
    for (double a : {1.0, 1.5, 2.5, 7.0})
      for (double t : {0.3, 2.0, 9.5, 31.0})
        rec = std::max(rec, std::abs(bessel_j(a - 1, t) + bessel_j(a + 1, t) - 2 * a / t * bessel_j(a, t)));
    s.at_most("three-term recurrence", rec, 1e-10);
    for (double a : {0.5, 1.0}) {
      const double t = 0.7 * bessel_zero(a, 1);
      const MittagLeffler ml = mittag_leffler_ratio(a, t, 2000);
      s.at_most("Mittag-Leffler ratio alpha=" + num(a), std::abs(ml.value - bessel_j(a + 1, t) / bessel_j(a, t)),
                ml.tail_bound + 1e-10);
    }
  });

  s.guard("rayleigh", [&] {
    for (double a : {0.0, 0.5, 1.0, 2.0}) {
      const RayleighSum r = rayleigh_sum(a, 2000);
      s.at_most("sum 1/j^2 alpha=" + num(a), std::abs(r.extrapolated - 0.25 / (a + 1)), 1e-6);
    }
  });

  s.guard("spectrum", [&] {
    for (auto [a, n] : {std::pair{0.0, 2}, std::pair{1.0, 4}}) {
      const double j = bessel_zero(a, 1);
      const EigenResult e = radial_eigen_min(a, n, 1.0, {1000, 0.0});
      s.at_most("eigen " + tag(a, n), std::abs(e.mu / (j * j) - 1), 1e-3);
      const RadialProfile ex = extremal_profile(a, n, 1.0, {2000, 0.0});
      double amp = 0.0;
      for (double v : ex.h) amp = std::max(amp, std::abs(v));
      s.at_most("extremal residual " + tag(a, n), euler_lagrange_residual(ex, a, n, j * j) / amp, 1e-6);
    }
  });

  s.guard("rigidity", [&] {
    for (auto [a, n] : {std::pair{0.0, 2}, std::pair{0.5, 3}, std::pair{1.0, 4}}) {
      s.at_most("integral identity " + tag(a, n), std::abs(integral_identity(a, n)), 1e-8);
      s.holds("single sign change " + tag(a, n), h_alpha_zero(a, n).sign_changes == 1);
      const double I = rigidity_functional(VolumeProfile::euclidean(n), a, n, 1.0);
      s.at_most("flat functional " + tag(a, n), std::abs(I), 1e-8 * omega(n));
    }
    double worst = 0.0;
    for (double beta : {0.0, 1.0, 2.0}) worst = std::max(worst, monotone_check(1, 1.0, 4, beta));
    worst = std::max({worst, monotone_check(2, 1.0, 4), monotone_check(3, 1.0, 4)});
    s.at_most("monotone functions (1,4)", worst, 1e-12);
  });

  s.guard("rearrange", [&] {
    const std::vector<NormSpec> specs = {euclidean_norm(2), normalize(lp_norm(2, 4.0)),
                                         normalize(quadratic_norm(2, {4, 0, 0, 1}))};
    int cav = 0, hl = 0, ps = 0, bpv = 0;
    const int cases = 6;
    for (int k = 0; k < cases; ++k) {
      const GridFunction g = random_grid(24, rng);
      const NormSpec& sp = specs[k % specs.size()];
      const RearrangeReport r = rearrange_report(g, sp);
      cav += r.cavalieri;
      hl += r.hardy_littlewood;
      ps += r.polya_szego;
      bpv += verify_bpv_grid(g, sp, 0.0, 4.0).pass;
    }
    s.holds("Cavalieri", cav == cases, cav);
    s.holds("Hardy-Littlewood", hl == cases, hl);
    s.holds("Polya-Szego", ps == cases, ps);
    s.holds("discrete BPV", bpv == cases, bpv);
  });

  s.guard("pde", [&] {
    const double j = bessel_zero(0, 1);
    const PdeProblem above{0.0, 2, 4.0, 0.0};
    const PdeSolution a = solve(above, {1000, 0.0}, 2, seed);
    double amp = 0.0;
    for (double v : a.profile.h) amp = std::max(amp, v);
    s.holds("nonzero above threshold", a.nonzero && !a.inconclusive, amp);
    if (a.nonzero) s.at_most("pde residual", a.residual / amp, 1e-5);
    const PdeProblem below{0.0, 2, 4.0, -j * j - 0.5};
    const PdeSolution b = solve(below, {1000, 0.0}, 2, seed);
    s.holds("collapse below threshold", !b.nonzero && !b.inconclusive);
  });

  return s.finish(seed);
}

}  // namespace bpv
