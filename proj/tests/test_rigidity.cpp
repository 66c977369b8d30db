#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "bpv/error.hpp"
#include "bpv/rigidity.hpp"
#include "bpv/specfun.hpp"

using namespace bpv;

TEST_CASE("integral identity vanishes") {
  struct Case {
    double alpha;
    int n;
  };
  for (const Case& c : {Case{0, 2}, Case{0.5, 3}, Case{1, 4}, Case{0.25, 3}, Case{1.5, 5}, Case{0.5, 4}}) {
    CHECK(std::abs(integral_identity(c.alpha, c.n)) <= 1e-10);
    const IdentityTerms t = integral_identity_terms(c.alpha, c.n);
    CHECK(t.next_sq == doctest::Approx(t.next_sq_exact).epsilon(1e-10));
    CHECK(t.cross == doctest::Approx(t.cross_exact).epsilon(1e-10));
    CHECK(t.same_sq == doctest::Approx(t.same_sq_exact).epsilon(1e-10));
  }
}

TEST_CASE("sign change of H") {
  struct Case {
    double alpha;
    int n;
    double t0;
  };
  // references from an mpmath root solve at 30 digits
  const Case cases[] = {{0, 2, 0.5965903207525134},    {0.5, 3, 0.6502392792407973}, {1, 4, 0.6863454900748267},
                        {0.25, 3, 0.5857053421411605}, {1.5, 5, 0.7130262214649082}, {0.5, 4, 0.5916726816125395}};
  for (const Case& c : cases) {
    const HAlphaZero z = h_alpha_zero(c.alpha, c.n);
    CHECK(z.t0 == doctest::Approx(c.t0).epsilon(1e-10));
    CHECK(z.sign_changes == 1);
    CHECK(h_alpha(c.alpha, c.n, 0.5 * z.t0) < 0.0);
    CHECK(h_alpha(c.alpha, c.n, 0.5 * (1 + z.t0)) > 0.0);
  }
}

TEST_CASE("monotone auxiliary functions") {
  for (double beta : {0.0, 1.0, 2.0}) CHECK(monotone_check(1, 0.5, 3, beta) <= 1e-12);
  CHECK(monotone_check(2, 1.0, 4) <= 1e-12);
  CHECK(monotone_check(3, 1.0, 4) <= 1e-12);
  CHECK(monotone_check(2, 0.0, 2) <= 1e-12);
  CHECK_THROWS_AS(monotone_check(4, 1.0, 4), Error);
  CHECK_THROWS_AS(monotone_check(1, 0.5, 3, 3.0), Error);
}

TEST_CASE("layer cake integral") {
  // int (1 - rho) dVol over the unit ball = omega_n / (n + 1)
  std::vector<double> rho, f;
  for (int i = 1; i <= 400; ++i) {
    rho.push_back(i / 400.0);
    f.push_back(1.0 - i / 400.0);
  }
  for (int n : {2, 3, 5}) {
    const double v = layer_cake_integral(VolumeProfile::euclidean(n), rho, f, 1.0);
    CHECK(v == doctest::Approx(omega(n) / (n + 1)).epsilon(1e-4));
  }
}

TEST_CASE("euclidean profile is flat") {
  for (double r : {0.5, 1.0, 3.0}) {
    const VerdictReport v = rigidity_verdict(VolumeProfile::euclidean(4), 1.0, 4, r);
    CHECK(v.verdict == Verdict::Flat);
    CHECK(std::abs(v.functional) <= v.tolerance);
    CHECK(v.max_deviation == 0.0);
  }
}

TEST_CASE("deficit profiles against references") {
  const VolumeProfile lin = parse_volume_profile(4, "deficit-linear:0.3:0.5");
  CHECK(rigidity_functional(lin, 1.0, 4, 1.0) == doctest::Approx(-0.0097078525422022641829).epsilon(1e-8));
  const VerdictReport v = rigidity_verdict(lin, 1.0, 4, 1.0);
  CHECK(v.verdict == Verdict::BpvViolated);
  CHECK(v.functional < -v.tolerance);

  const VolumeProfile step = parse_volume_profile(2, "deficit-step:0.2:0.4");
  CHECK(rigidity_functional(step, 0.0, 2, 1.0) == doctest::Approx(-0.034920212283266696932).epsilon(1e-8));
  CHECK(rigidity_verdict(step, 0.0, 2, 1.0).verdict == Verdict::BpvViolated);

  const VolumeProfile pw = parse_volume_profile(3, "deficit-power:0.1:0.7:2");
  CHECK(rigidity_verdict(pw, 0.5, 3, 1.0).verdict == Verdict::BpvViolated);
}

TEST_CASE("functional scales like r^n for dilated deficits") {
  const VolumeProfile a = VolumeProfile::deficit(3, DeficitShape::Linear, 0.2, 0.5);
  const VolumeProfile b = VolumeProfile::deficit(3, DeficitShape::Linear, 0.2, 1.0);
  CHECK(rigidity_functional(b, 0.5, 3, 2.0) == doctest::Approx(8.0 * rigidity_functional(a, 0.5, 3, 1.0)).epsilon(1e-8));
}

TEST_CASE("round sphere balls have a volume deficit") {
  const VolumeProfile s = parse_volume_profile(3, "sphere:1");
  CHECK(s.ratio(1e-6) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s.ratio(1.0) < 1.0);
  const VerdictReport v = rigidity_verdict(s, 0.5, 3, 1.0);
  CHECK(v.verdict == Verdict::BpvViolated);
}

TEST_CASE("scaled flat profile has vanishing functional and is rejected") {
  const VolumeProfile s = VolumeProfile::scaled_flat(3, 0.5);
  CHECK(std::abs(rigidity_functional(s, 0.5, 3, 1.0)) <= 1e-6 * omega(3));
  CHECK_THROWS_AS(rigidity_verdict(s, 0.5, 3, 1.0), Error);
}

TEST_CASE("tabulated profiles") {
  const auto path = std::filesystem::temp_directory_path() / "bpv_test_table.csv";
  {
    std::ofstream out(path);
    out.precision(17);
    out << "rho,vol\n";
    for (int k = 1; k <= 20; ++k) {
      const double r = k / 20.0;
      out << r << "," << omega(3) * r * r * r * (1.0 - 0.05 * std::max(0.0, r - 0.2)) << "\n";
    }
  }
  const VolumeProfile t = read_volume_table(3, path.string());
  CHECK(t.ratio(0.5) == doctest::Approx(1.0 - 0.015).epsilon(1e-6));
  CHECK(t.ratio(0.1) == 1.0);
  CHECK(rigidity_verdict(t, 0.5, 3, 1.0).verdict == Verdict::BpvViolated);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(VolumeProfile::tabulated(3, {0.1, 0.2}, {omega(3) * 1e-3, omega(3) * 9e-3}), Error);
  CHECK_THROWS_AS(read_volume_table(3, "/nonexistent/table.csv"), Error);
}

TEST_CASE("profile parsing") {
  CHECK(parse_volume_profile(2, "euclid").kind() == VolumeKind::Euclidean);
  CHECK(parse_volume_profile(2, "scaled:0.5").kind() == VolumeKind::ScaledFlat);
  CHECK_THROWS_AS(parse_volume_profile(2, "bogus"), Error);
  CHECK_THROWS_AS(parse_volume_profile(2, "deficit-linear:0.3"), Error);
  CHECK_THROWS_AS(parse_volume_profile(2, "deficit-linear:1.5:0.5"), Error);
}
