#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace bpv {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

// Adaptive Gauss-Kronrod (7/15) on [a,b]. Interior breakpoints split the
// interval up front so kinks of the integrand sit on panel boundaries.
// Throws NoConvergence when the panel budget runs out before the tolerance.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol = 1e-13,
                     const std::vector<double>& breakpoints = {}, int max_panels = 20000);

// Gauss-Legendre nodes and weights on [-1,1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussRule& gauss_legendre(int points);

// Neumaier compensated sum.
class KahanSum {
 public:
  void add(double v) {
    const double t = s_ + v;
    if (std::abs(s_) >= std::abs(v))
      c_ += (s_ - t) + v;
    else
      c_ += (v - t) + s_;
    s_ = t;
  }
  double value() const { return s_ + c_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace bpv
