#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "bpv/error.hpp"
#include "bpv/rearrange.hpp"
#include "support.hpp"

using namespace bpv;
using bpv_test::random_grid;

namespace {

std::vector<NormSpec> families() {
  return {euclidean_norm(2), normalize(lp_norm(2, 4.0)), normalize(quadratic_norm(2, {4, 0, 0, 1}))};
}

}  // namespace

TEST_CASE("grid text round trip") {
  std::mt19937_64 rng(3);
  const GridFunction g = random_grid(10, rng);
  const GridFunction back = parse_grid(format_grid(g));
  CHECK(back.n == 2);
  CHECK(back.shape == g.shape);
  CHECK(back.h == g.h);
  CHECK(back.origin == g.origin);
  CHECK(back.values == g.values);
}

TEST_CASE("malformed grids are rejected") {
  CHECK_THROWS_AS(parse_grid("2 2 2 0 0 1\n1 2 3"), Error);
  CHECK_THROWS_AS(parse_grid("2 2 2 0 0 1\n1 2 -3 4"), Error);
  CHECK_THROWS_AS(parse_grid("2 2 2 0 0 0\n1 2 3 4"), Error);
  CHECK_THROWS_AS(parse_grid("two"), Error);
}

TEST_CASE("symmetrization preserves the value multiset") {
  std::mt19937_64 rng(5);
  for (const NormSpec& s : families()) {
    const GridFunction g = random_grid(20, rng);
    const GridFunction r = symmetrize(g, s);
    CHECK(r.h == g.h);
    CHECK(boundary_vanishing(r));
    std::vector<double> a, b;
    for (double v : g.values)
      if (v > 0) a.push_back(v);
    for (double v : r.values)
      if (v > 0) b.push_back(v);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
    CHECK(discrete_mass(r) == discrete_mass(g));
  }
}

TEST_CASE("rearranged values decrease in the norm") {
  std::mt19937_64 rng(8);
  const NormSpec s = families()[1];
  const Norm f(s);
  const GridFunction r = symmetrize(random_grid(16, rng), s);
  std::vector<std::pair<double, double>> fv;
  double x[2];
  for (size_t k = 0; k < r.size(); ++k) {
    r.center(k, x);
    fv.push_back({f.eval(x), r.values[k]});
  }
  std::sort(fv.begin(), fv.end());
  for (size_t k = 1; k < fv.size(); ++k)
    if (fv[k].first > fv[k - 1].first) CHECK(fv[k].second <= fv[k - 1].second);
}

TEST_CASE("symmetrization is idempotent") {
  std::mt19937_64 rng(9);
  for (const NormSpec& s : families()) {
    const GridFunction once = symmetrize(random_grid(18, rng), s);
    const GridFunction twice = symmetrize(once, s);
    CHECK(twice.values == once.values);
  }
}

TEST_CASE("Cavalieri, Hardy-Littlewood and Polya-Szego on random grids") {
  std::mt19937_64 rng(21);
  const auto specs = families();
  for (int k = 0; k < 30; ++k) {
    const RearrangeReport r = rearrange_report(random_grid(24, rng), specs[k % 3]);
    CHECK(r.cavalieri);
    CHECK(r.hardy_littlewood);
    CHECK(r.hardy_out >= r.hardy_in);
    CHECK(r.polya_szego);
    CHECK(r.dirichlet_out <= r.dirichlet_in * (1 + r.slack));
  }
}

TEST_CASE("individual checks agree with the combined report") {
  std::mt19937_64 rng(4);
  const GridFunction g = random_grid(16, rng);
  const NormSpec s = families()[2];
  const RearrangeReport all = rearrange_report(g, s);
  CHECK(cavalieri_check(g, s).cavalieri == all.cavalieri);
  CHECK(hardy_littlewood_check(g, s).hardy_out == all.hardy_out);
  CHECK(polya_szego_check(g, s).dirichlet_out == all.dirichlet_out);
}

TEST_CASE("discrete Hardy ratio stays above the sharp constant in 3D") {
  // u = F^{-1/2+d} - 1 approaches the Hardy optimizer as d -> 0 and h -> 0.
  const NormSpec e3 = euclidean_norm(3);
  const std::pair<int, double> seq[] = {{32, 0.25}, {64, 0.1}};
  double prev = 1e9;
  for (auto [S, d] : seq) {
    const GridFunction g =
        bpv_test::radial_grid(e3, S, 2.5, [d = d](double F) { return std::pow(F, -0.5 + d) - 1.0; });
    const double ratio = hardy_inequality_check(g, e3);
    CHECK(ratio >= 0.25);
    CHECK(ratio < prev);
    prev = ratio;
  }
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(hardy_inequality_check(random_grid(8, rng), euclidean_norm(2)), Error);
}
