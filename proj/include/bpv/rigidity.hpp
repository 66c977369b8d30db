#pragma once

#include <string>
#include <vector>

namespace bpv {

enum class VolumeKind { Euclidean, ScaledFlat, Tabulated, Sphere, Deficit };
enum class DeficitShape { Linear, Power, Step };

// rho -> Vol(B(rho)), stored through the ratio Vol/(omega_n rho^n), which must
// be non-increasing.
class VolumeProfile {
 public:
  static VolumeProfile euclidean(int n);
  static VolumeProfile scaled_flat(int n, double c);
  // Ratios of the table are interpolated with monotone cubic Hermite
  // (Fritsch-Carlson) and held constant outside the table.
  static VolumeProfile tabulated(int n, std::vector<double> rho, std::vector<double> vol);
  // Geodesic balls of the round sphere of the given radius.
  static VolumeProfile sphere(int n, double radius);
  // ratio = 1 - amplitude * g(rho/scale) with g(x) = min(x,1), min(x^k,1) or [x >= 1].
  static VolumeProfile deficit(int n, DeficitShape shape, double amplitude, double scale, double exponent = 1.0);

  int dim() const { return n_; }
  VolumeKind kind() const { return kind_; }
  double ratio(double rho) const;
  double volume(double rho) const;
  // Radii where the ratio is not smooth.
  std::vector<double> kinks() const;
  std::string describe() const;

 private:
  int n_ = 2;
  VolumeKind kind_ = VolumeKind::Euclidean;
  double c_ = 1.0;
  DeficitShape shape_ = DeficitShape::Linear;
  double amp_ = 0.0, scale_ = 1.0, expo_ = 1.0;
  std::vector<double> rho_, ratio_, slope_;
};

// Table file: two comma- or space-separated columns rho, vol; an optional
// non-numeric first line is skipped.
VolumeProfile read_volume_table(int n, const std::string& path);

// euclid | scaled:c | table:<file> | sphere:R | deficit-linear:a:s |
// deficit-power:a:s:k | deficit-step:a:s
VolumeProfile parse_volume_profile(int n, const std::string& text);

// Admissible: n = 2 with alpha = 0 (reduced form J_1^2 - J_0^2) or n >= 3 with 0 < alpha <= (n-2)/2.
double h_alpha(double alpha, int n, double t);

struct HAlphaZero {
  double t0 = 0.0;
  double value = 0.0;  // h_alpha at t0
  int sign_changes = 0;
};
// Scans t = i/1000 and bisects the single sign change. More than one change,
// or a pattern other than negative-then-positive, throws Internal.
HAlphaZero h_alpha_zero(double alpha, int n);

// int_0^1 t H_alpha(t) dt, which vanishes identically.
double integral_identity(double alpha, int n);

struct IdentityTerms {
  double next_sq = 0.0, next_sq_exact = 0.0;  // int t J_{a+1}^2(jt) dt and J_{a+1}(j)^2/2
  double cross = 0.0, cross_exact = 0.0;      // int J_a(jt) J_a'(jt) dt and -J_a(0)^2/(2j)
  double same_sq = 0.0, same_sq_exact = 0.0;  // int t J_a^2(jt) dt and -J_{a-1}(j) J_{a+1}(j)/2
};
IdentityTerms integral_identity_terms(double alpha, int n);

// which = 1: t^{beta-n} J_a^2(jt) (non-increasing); 2: t^{1-n} J_a J_{a+1}
// (non-increasing); 3: t^{2-n} J_{a+1} [J_{a+1} - (n+2a)/(jt) J_a]
// (non-decreasing). Returns the largest relative violation over t = i/10^4.
double monotone_check(int which, double alpha, int n, double beta = 0.0);
double monotone_function(int which, double alpha, int n, double beta, double t);

// int_0^r f dVol for f piecewise linear on the nodes rho (last node r, f(r) = 0),
// constant below the first node, evaluated as -int Vol df.
double layer_cake_integral(const VolumeProfile& vp, const std::vector<double>& rho, const std::vector<double>& f,
                           double r);

// I = int_0^1 Vol(rt) t^{1-n} H_alpha(t) dt = omega_n r^n int_0^1 ratio(rt) t H_alpha(t) dt.
double rigidity_functional(const VolumeProfile& vp, double alpha, int n, double r);

enum class Verdict { Flat, BpvViolated };
struct VerdictReport {
  Verdict verdict = Verdict::Flat;
  double functional = 0.0;
  double tolerance = 0.0;      // 1e-6 omega_n r^n
  double max_deviation = 0.0;  // sup |ratio - 1| on the scan
  double t0 = 0.0;
};
VerdictReport rigidity_verdict(const VolumeProfile& vp, double alpha, int n, double r);

}  // namespace bpv
