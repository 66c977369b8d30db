#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "bpv/error.hpp"
#include "bpv/specfun.hpp"

using namespace bpv;

// Reference values below were produced with mpmath at 30 digits.

TEST_CASE("zeros against high-precision references") {
  struct Row {
    double order;
    int k;
    double zero;
  };
  const Row rows[] = {
      {0.0, 1, 2.4048255576957727686}, {0.0, 2, 5.5200781102863106496}, {0.0, 3, 8.653727912911012217},
      {0.5, 1, 3.1415926535897932385}, {1.0, 1, 3.8317059702075123156}, {1.5, 1, 4.4934094579090641753},
      {2.0, 1, 5.1356223018406825563}, {0.3, 1, 2.854097224376684416},  {5.0, 4, 18.980133875179921121},
  };
  for (const Row& r : rows) {
    const double z = bessel_zero(r.order, r.k);
    CHECK(std::abs(z - r.zero) <= 1e-12 * r.zero);
    CHECK(std::abs(bessel_j(r.order, z)) <= 1e-11);
  }
  CHECK(std::abs(bessel_zero(0, 1) - 2.4048) < 5e-5);
}

TEST_CASE("J against high-precision references") {
  CHECK(bessel_j(0, 1) == doctest::Approx(0.76519768655796655145).epsilon(1e-14));
  CHECK(bessel_j(2.5, 10) == doctest::Approx(0.19665848358181841265).epsilon(1e-13));
  CHECK(bessel_j(30, 40) == doctest::Approx(-0.10408594976564972693).epsilon(1e-12));
  CHECK(bessel_j(0.3, 0.01) == doctest::Approx(0.22733294197947475562).epsilon(1e-14));
  CHECK(bessel_j(1, 100) == doctest::Approx(-0.077145352014112158033).epsilon(1e-12));
  CHECK(bessel_j_prime(0, 1) == doctest::Approx(-0.44005058574493351596).epsilon(1e-14));
  CHECK(bessel_j_prime(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(bessel_j_prime(2, 3) == doctest::Approx(0.014998118135342407654).epsilon(1e-11));
}

TEST_CASE("J against Boost over a parameter sweep") {
  double worst = 0.0;
  for (double a = 0.0; a <= 30.0; a += 0.75)
    for (double t = 0.05; t <= 120.0; t *= 1.37)
      worst = std::max(worst, std::abs(bessel_j(a, t) - boost::math::cyl_bessel_j(a, t)));
  CHECK(worst < 1e-13);
}

TEST_CASE("zeros against Boost and interlacing") {
  for (double a : {0.0, 0.25, 1.0, 3.5, 10.0}) {
    const ZeroTable t = zero_table(a, 20);
    REQUIRE(t.zeros.size() == 20);
    for (int k = 0; k < 20; ++k) {
      CHECK(std::abs(t.zeros[k] - boost::math::cyl_bessel_j_zero(a, k + 1)) <= 1e-12 * t.zeros[k]);
      if (k > 0) CHECK(t.zeros[k] > t.zeros[k - 1]);
    }
    // j_{a,k} < j_{a+1,k} < j_{a,k+1}
    const ZeroTable u = zero_table(a + 1, 19);
    for (int k = 0; k < 19; ++k) {
      CHECK(t.zeros[k] < u.zeros[k]);
      CHECK(u.zeros[k] < t.zeros[k + 1]);
    }
  }
}

TEST_CASE("recurrence identities") {
  double worst = 0.0;
  for (double a : {1.0, 1.5, 2.0, 4.25, 9.0})
    for (double t : {0.2, 1.0, 3.3, 12.0, 47.0}) {
      const double lhs = bessel_j(a - 1, t) + bessel_j(a + 1, t);
      worst = std::max(worst, std::abs(lhs - 2 * a / t * bessel_j(a, t)));
      const double d = bessel_j(a - 1, t) - bessel_j(a + 1, t);
      worst = std::max(worst, std::abs(d - 2 * bessel_j_prime(a, t)));
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("Mittag-Leffler expansion") {
  for (double a : {0.5, 1.0, 2.0}) {
    const double j1 = bessel_zero(a, 1);
    for (double frac : {0.1, 0.5, 0.9}) {
      const double t = frac * j1;
      const MittagLeffler m = mittag_leffler_ratio(a, t, 3000);
      CHECK(std::abs(m.value - bessel_j(a + 1, t) / bessel_j(a, t)) <= m.tail_bound + 1e-10);
      // t J'/J - a + sum 2t^2/(j_k^2 - t^2) = 0
      const double second = t * bessel_j_prime(a, t) / bessel_j(a, t) - a + t * m.value;
      CHECK(std::abs(second) <= t * m.tail_bound + 1e-10);
    }
  }
  CHECK_THROWS_AS(mittag_leffler_ratio(1.0, 4.0, 100), Error);
  CHECK_THROWS_AS(mittag_leffler_ratio(0.0, 1.0, 100), Error);
}

TEST_CASE("Rayleigh sum") {
  for (double a : {0.0, 0.5, 1.0, 2.0}) {
    const RayleighSum r = rayleigh_sum(a, 2000);
    CHECK(std::abs(r.extrapolated - 0.25 / (a + 1)) < 1e-6);
    CHECK(std::abs(r.extrapolated - 0.25 / (a + 1)) <= r.tail_bound);
    CHECK(r.partial < 0.25 / (a + 1));
  }
  // partial sums increase with K
  CHECK(rayleigh_partial_sum(1.0, 100) < rayleigh_partial_sum(1.0, 200));
}

TEST_CASE("unit ball volumes") {
  CHECK(omega(2) == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK(omega(3) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-15));
  CHECK(omega(4) == doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-15));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(bessel_j(-0.5, 1.0), Error);
  CHECK_THROWS_AS(bessel_j(1.0, -1.0), Error);
  CHECK_THROWS_AS(bessel_zero(0.0, 0), Error);
  CHECK_THROWS_AS(bessel_j_prime(0.5, 0.0), Error);
  try {
    bessel_zero(std::nan(""), 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}
