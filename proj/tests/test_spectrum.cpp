#include <doctest.h>

#include <cmath>
#include <random>

#include "bpv/error.hpp"
#include "bpv/specfun.hpp"
#include "bpv/spectrum.hpp"
#include "support.hpp"

using namespace bpv;

namespace {

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("sharp constant formula") {
  CHECK(sharp_constant(0, 2, M_PI) == doctest::Approx(5.7831859629467845).epsilon(1e-14));
  const double j = bessel_zero(1.0, 1);
  CHECK(sharp_constant(1.0, 4, omega(4)) == doctest::Approx(j * j).epsilon(1e-14));
  // volume^{-2/n} scaling
  const double a = sharp_constant(0.5, 3, 1.0), b = sharp_constant(0.5, 3, 8.0);
  CHECK(a / b == doctest::Approx(4.0).epsilon(1e-13));
  CHECK_THROWS_AS(sharp_constant(0.5, 2, 1.0), Error);
  CHECK_THROWS_AS(sharp_constant(1.0, 3, 1.0), Error);
  CHECK_THROWS_AS(sharp_constant(0.0, 2, -1.0), Error);
}

TEST_CASE("extremal profile solves the radial equation") {
  struct Case {
    double alpha;
    int n;
    double R;
  };
  for (const Case& c : {Case{0, 2, 1}, Case{0.5, 3, 1}, Case{1, 4, 2}, Case{0.25, 3, 1.5}}) {
    const RadialProfile p = extremal_profile(c.alpha, c.n, c.R, {4000, 0.0});
    const double j = bessel_zero(c.alpha, 1);
    const double Q = j * j / (c.R * c.R);
    const double amp = sup_abs(p.h);
    CHECK(p.h.back() == doctest::Approx(0.0));
    CHECK(euler_lagrange_residual(p, c.alpha, c.n, Q) / amp <= 1e-6);
    // a wrong eigenvalue leaves an O(1) residual
    CHECK(euler_lagrange_residual(p, c.alpha, c.n, 1.1 * Q) / amp > 1e-3);
    CHECK(radial_rayleigh_quotient(p, c.alpha, c.n) == doctest::Approx(Q).epsilon(1e-4));
  }
}

TEST_CASE("origin constant") {
  CHECK(extremal_origin_constant(0, 2, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(extremal_origin_constant(0.5, 3, 1) == doctest::Approx(1.4142135623730950488).epsilon(1e-12));
  CHECK(extremal_origin_constant(1, 4, 2) == doctest::Approx(0.9579264925518780789).epsilon(1e-12));
  // regular case: (n-2)/2 - alpha = 0, so h itself tends to the constant
  const RadialProfile p = extremal_profile(0.5, 3, 1.0, {4000, 0.0});
  CHECK(p.h[0] == doctest::Approx(1.4142135623730950488).epsilon(1e-5));
}

TEST_CASE("radial eigenvalue matches j^2/R^2 and scales under dilation") {
  for (double alpha : {0.5, 1.0}) {
    const int n = 4;
    const double j = bessel_zero(alpha, 1);
    const EigenResult e1 = radial_eigen_min(alpha, n, 1.0, {2000, 0.0});
    const EigenResult e2 = radial_eigen_min(alpha, n, 3.0, {2000, 0.0});
    CHECK(e1.mu == doctest::Approx(j * j).epsilon(1e-5));
    CHECK(e1.mu / e2.mu == doctest::Approx(9.0).epsilon(1e-9));
    CHECK(sup_abs(e1.minimizer.h) == doctest::Approx(1.0));
    for (double v : e1.minimizer.h) CHECK(v >= 0.0);
  }
  const EigenResult e = radial_eigen_min(0, 2, 1.0, {2000, 0.0});
  CHECK(e.mu == doctest::Approx(5.7831859629467845).epsilon(1e-5));
}

TEST_CASE("discrete inequality on a smooth bump") {
  const NormSpec e2 = euclidean_norm(2);
  // cos^2 bump supported in the square [-1,1]^2 of area 4
  GridFunction g = centered_grid(2, {40, 40}, 2.0 / 40);
  double x[2];
  for (size_t k = 0; k < g.size(); ++k) {
    g.center(k, x);
    g.values[k] = std::cos(M_PI * x[0] / 2) * std::cos(M_PI * x[1] / 2);
  }
  int idx[2];
  for (size_t k = 0; k < g.size(); ++k) {
    g.unflatten(k, idx);
    if (idx[0] == 0 || idx[1] == 0 || idx[0] == 39 || idx[1] == 39) g.values[k] = 0.0;
  }
  const BpvReport r = verify_bpv_grid(g, e2, 0.0, 4.0);
  CHECK(r.pass);
  CHECK(r.margin > 0.0);
  CHECK(r.hardy_term == 0.0);
  CHECK(r.sharp_constant == doctest::Approx(sharp_constant(0, 2, 4.0)));

  // quadratic in the values
  GridFunction g3 = g;
  for (double& v : g3.values) v *= 3.0;
  const BpvReport r3 = verify_bpv_grid(g3, e2, 0.0, 4.0);
  CHECK(r3.lhs == doctest::Approx(9.0 * r.lhs).epsilon(1e-13));
  CHECK(r3.margin == doctest::Approx(9.0 * r.margin).epsilon(1e-12));
}

TEST_CASE("discrete inequality on random grids for several norms") {
  std::mt19937_64 rng(17);
  const NormSpec specs[] = {euclidean_norm(2), normalize(lp_norm(2, 4.0)), normalize(quadratic_norm(2, {4, 0, 0, 1}))};
  for (int k = 0; k < 12; ++k) {
    const BpvReport r = verify_bpv_grid(bpv_test::random_grid(32, rng), specs[k % 3], 0.0, 4.0);
    CHECK(r.pass);
  }
}

TEST_CASE("Hardy term and admissible range in 3D") {
  const NormSpec e3 = euclidean_norm(3);
  const GridFunction g = bpv_test::radial_grid(e3, 16, 2.5, [](double F) { return 1.0 - F; });
  const BpvReport r0 = verify_bpv_grid(g, e3, 0.0, omega(3));
  CHECK(r0.uniformity == doctest::Approx(1.0));
  CHECK(r0.alpha_lower == doctest::Approx(0.0).epsilon(1e-6));
  CHECK_FALSE(r0.below_admissible_range);
  CHECK(r0.hardy_term > 0.0);
  const BpvReport rh = verify_bpv_grid(g, e3, 0.5, omega(3));
  CHECK(rh.hardy_term == 0.0);

  const NormSpec l4 = normalize(lp_norm(3, 4.0));
  const GridFunction g4 = bpv_test::radial_grid(l4, 16, 2.5, [](double F) { return 1.0 - F; });
  const BpvReport r4 = verify_bpv_grid(g4, l4, 0.0, omega(3));
  CHECK(r4.uniformity < 1.0);
  CHECK(r4.alpha_lower > 0.0);
  CHECK(r4.below_admissible_range);
}

TEST_CASE("verify rejects bad inputs") {
  GridFunction g = centered_grid(2, {4, 4}, 0.5);
  g.values[5] = 1.0;
  CHECK_THROWS_AS(verify_bpv_grid(g, lp_norm(2, 4.0), 0.0, 1.0), Error);  // not normalized
  CHECK_THROWS_AS(verify_bpv_grid(g, euclidean_norm(2), 0.3, 1.0), Error);
  CHECK_THROWS_AS(verify_bpv_grid(g, euclidean_norm(3), 0.0, 1.0), Error);
  g.values[0] = 1.0;
  CHECK_THROWS_AS(verify_bpv_grid(g, euclidean_norm(2), 0.0, 1.0), Error);  // boundary
}
