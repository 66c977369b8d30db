#include <doctest.h>

#include <cmath>

#include "bpv/error.hpp"
#include "bpv/quadrature.hpp"

using namespace bpv;

TEST_CASE("Gauss-Legendre weights and polynomial exactness") {
  for (int pts : {1, 2, 4, 8, 20}) {
    const GaussRule& g = gauss_legendre(pts);
    REQUIRE(g.x.size() == static_cast<size_t>(pts));
    double w = 0.0, mono = 0.0;
    const int deg = 2 * pts - 2;  // even degree below the exactness limit
    for (size_t i = 0; i < g.x.size(); ++i) {
      w += g.w[i];
      mono += g.w[i] * std::pow(g.x[i], deg);
    }
    CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(mono == doctest::Approx(2.0 / (deg + 1)).epsilon(1e-13));
  }
}

TEST_CASE("adaptive Gauss-Kronrod") {
  SUBCASE("smooth") {
    const QuadResult r = integrate([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-14);
    CHECK(std::abs(r.value - (std::exp(1.0) - 1.0)) < 1e-14);
  }
  SUBCASE("endpoint singularity") {
    const QuadResult r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-12, 1e-12);
    CHECK(std::abs(r.value - 2.0) < 1e-10);
  }
  SUBCASE("kink on a breakpoint") {
    const QuadResult r = integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1e-15, 1e-15, {0.3});
    CHECK(std::abs(r.value - (0.045 + 0.245)) < 1e-15);
  }
  SUBCASE("reversed interval is the negative") {
    auto f = [](double x) { return x * x; };
    CHECK(integrate(f, 1.0, 0.0, 1e-14).value == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  }
  SUBCASE("panel budget") {
    auto wild = [](double x) { return std::sin(1.0 / (x + 1e-9)); };
    CHECK_THROWS_AS(integrate(wild, 0.0, 1.0, 1e-15, 0.0, {}, 10), Error);
  }
}

TEST_CASE("compensated sum") {
  KahanSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-6));
}
