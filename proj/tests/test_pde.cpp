#include <doctest.h>

#include <cmath>

#include "bpv/error.hpp"
#include "bpv/pde.hpp"
#include "bpv/specfun.hpp"
#include "bpv/spectrum.hpp"

using namespace bpv;

namespace {

double amplitude(const RadialProfile& p) {
  double m = 0.0;
  for (double v : p.h) m = std::max(m, std::abs(v));
  return m;
}

RadialProfile every_other(const RadialProfile& p) {
  RadialProfile q = p;
  q.rho.clear();
  q.h.clear();
  for (size_t i = 1; i < p.rho.size(); i += 2) {
    q.rho.push_back(p.rho[i]);
    q.h.push_back(p.h[i]);
  }
  return q;
}

RadialProfile scaled(RadialProfile p, double t) {
  for (double& v : p.h) v *= t;
  return p;
}

}  // namespace

TEST_CASE("problem validation") {
  CHECK_NOTHROW(validate(PdeProblem{0.0, 2, 10.0, 0.0}));
  CHECK_NOTHROW(validate(PdeProblem{0.5, 3, 5.9, 0.0}));
  CHECK_THROWS_AS(validate(PdeProblem{0.5, 3, 6.0, 0.0}), Error);
  CHECK_THROWS_AS(validate(PdeProblem{0.0, 2, 2.0, 0.0}), Error);
  CHECK_THROWS_AS(validate(PdeProblem{0.5, 2, 4.0, 0.0}), Error);
  CHECK_THROWS_AS(validate(PdeProblem{0.0, 3, 4.0, 0.0}), Error);
}

TEST_CASE("coercivity constant") {
  const double j0 = bessel_zero(0, 1);
  CHECK(coercivity_constant({0.0, 2, 4.0, 1.0}, 1.0) == 1.0);
  CHECK(coercivity_constant({0.0, 2, 4.0, -0.5 * j0 * j0}, 1.0) == doctest::Approx(0.5));
  const double j1 = bessel_zero(1, 1);
  // n = 4, alpha = 1: 4 alpha^2/(n-2)^2 = 1
  CHECK(coercivity_constant({1.0, 4, 3.0, -0.25 * j1 * j1}, 1.0) == doctest::Approx(0.75));
  // n = 4, alpha = 0.5: factor 1/4
  CHECK(coercivity_constant({0.5, 4, 3.0, 2.0}, 0.8) == doctest::Approx(0.25));
  CHECK_THROWS_AS(coercivity_constant({0.0, 2, 4.0, -j0 * j0 - 1}, 1.0), Error);
  CHECK_THROWS_AS(coercivity_constant({0.0, 2, 4.0, 0.0}, 0.0), Error);
  CHECK_THROWS_AS(coercivity_constant({0.0, 2, 4.0, 0.0}, 1.5), Error);
}

TEST_CASE("coercivity bound holds on the first eigenfunction") {
  // n = 2: the quadratic part of the energy is int h'^2 + lambda h^2 and must
  // dominate C int h'^2. Equality holds for lambda < 0 on the eigenfunction.
  const double j = bessel_zero(0, 1);
  const RadialProfile u = extremal_profile(0.0, 2, 1.0, {2000, 1.0});
  const double t = 1e-4;
  const double grad = 2.0 * energy({0.0, 2, 4.0, 0.0}, scaled(u, t)) / (t * t);
  for (double lambda : {-0.5 * j * j, -0.1 * j * j, 0.0, 3.0}) {
    const PdeProblem pb{0.0, 2, 4.0, lambda};
    const double quad = 2.0 * energy(pb, scaled(u, t)) / (t * t);
    CHECK(quad >= coercivity_constant(pb, 1.0) * grad * (1 - 1e-4));
  }
}

TEST_CASE("residual of the zero function and of the linear extremal") {
  const PdeProblem pb{1.0, 4, 3.0, 0.0};
  RadialProfile zero = extremal_profile(1.0, 4, 1.0, {1000, 1.0});
  for (double& v : zero.h) v = 0.0;
  CHECK(radial_residual(pb, zero) == 0.0);

  const double j = bessel_zero(1.0, 1);
  const RadialProfile u = extremal_profile(1.0, 4, 1.0, {2000, 1.0});
  const PdeProblem lin{1.0, 4, 3.0, -j * j};
  CHECK(radial_residual(lin, u, false) / amplitude(u) <= 1e-5);
  CHECK(radial_residual(pb, u, false) / amplitude(u) > 1.0);
}

TEST_CASE("energy along rays") {
  const PdeProblem pb{0.0, 2, 4.0, 0.0};
  const RadialProfile u = extremal_profile(0.0, 2, 1.0, {1000, 1.0});
  CHECK(energy(pb, scaled(u, 1e-3)) > 0.0);
  CHECK(energy(pb, scaled(u, 1e3)) < 0.0);
  CHECK(energy(pb, scaled(u, 0.0)) == 0.0);
}

TEST_CASE("nonnegativity projection") {
  RadialProfile p;
  p.rho = {0.25, 0.5, 0.75, 1.0};
  p.h = {1.0, -0.5, 0.2, 0.0};
  const RadialProfile q = nonnegativity_projection(p);
  CHECK(q.h == std::vector<double>{1.0, 0.0, 0.2, 0.0});
  CHECK(q.rho == p.rho);
}

TEST_CASE("solutions above and below the threshold") {
  const double j0 = bessel_zero(0, 1);
  const PdeSolution a = solve({0.0, 2, 4.0, 0.0}, {1000, 0.0}, 2, 0);
  REQUIRE(a.nonzero);
  CHECK_FALSE(a.inconclusive);
  CHECK(a.residual / amplitude(a.profile) <= 1e-5);
  CHECK(a.energy > 0.0);
  for (double v : a.profile.h) CHECK(v >= 0.0);

  const PdeSolution b = solve({0.0, 2, 4.0, -j0 * j0 - 0.5}, {1000, 0.0}, 2, 0);
  CHECK_FALSE(b.nonzero);
  CHECK_FALSE(b.inconclusive);
  CHECK(b.collapsed_attempts == b.attempts);

  const double j1 = bessel_zero(1.0, 1);
  const PdeSolution c = solve({1.0, 4, 3.0, -0.5 * j1 * j1}, {1000, 0.0}, 2, 0);
  REQUIRE(c.nonzero);
  CHECK(c.residual / amplitude(c.profile) <= 1e-5);
}

TEST_CASE("necessity identity on computed solutions") {
  const PdeProblem pb{0.5, 3, 4.0, 1.0};
  const PdeSolution s = solve(pb, {2000, 0.0}, 1, 0);
  REQUIRE(s.nonzero);
  const NecessityIdentity id = necessity_identity(pb, s.profile);
  CHECK(id.relative_error <= 1e-4);
  CHECK(id.lhs > 0.0);
}

TEST_CASE("near the bifurcation the solution looks like the eigenfunction") {
  const double j = bessel_zero(0, 1);
  const PdeSolution s = solve({0.0, 2, 4.0, -j * j + 1e-3}, {2000, 0.0}, 1, 0);
  REQUIRE(s.nonzero);
  const RadialProfile e = extremal_profile(0.0, 2, 1.0, {2000, 1.0});
  const double ms = amplitude(s.profile), me = amplitude(e);
  CHECK(ms < 0.1);
  double d = 0.0;
  for (size_t i = 0; i < e.h.size(); ++i) d = std::max(d, std::abs(s.profile.h[i] / ms - e.h[i] / me));
  CHECK(d <= 1e-2);
}

TEST_CASE("restricted residual converges at second order") {
  const PdeProblem pb{1.0, 4, 3.0, 0.0};
  const PdeSolution coarse = solve(pb, {1000, 0.0}, 1, 0);
  const PdeSolution fine = solve(pb, {2000, 0.0}, 1, 0);
  REQUIRE(coarse.nonzero);
  REQUIRE(fine.nonzero);
  const double r1 = radial_residual(pb, every_other(coarse.profile));
  const double r2 = radial_residual(pb, every_other(fine.profile));
  CHECK(r1 / r2 > 3.0);
}

TEST_CASE("solver is deterministic for a fixed seed") {
  const PdeProblem pb{0.0, 2, 3.0, 2.0};
  const PdeSolution a = solve(pb, {600, 0.0}, 3, 5);
  const PdeSolution b = solve(pb, {600, 0.0}, 3, 5);
  CHECK(a.profile.h == b.profile.h);
  CHECK(a.energy == b.energy);
}
