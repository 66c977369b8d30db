#pragma once

#include <vector>

namespace bpv {

// Bessel function of the first kind J_order(t), order >= 0, t >= 0.
double bessel_j(double order, double t);

// d/dt J_order(t) = -J_{order+1}(t) + (order/t) J_order(t). At t = 0 only
// order >= 1 is accepted.
double bessel_j_prime(double order, double t);

// k-th positive zero j_{order,k}, k >= 1. The returned root lies inside a
// sign-change bracket of bessel_j and has |J_order(root)| <= 1e-11.
double bessel_zero(double order, int k);

struct ZeroTable {
  double alpha = 0.0;
  std::vector<double> zeros;
  double tolerance = 1e-11;
};
ZeroTable zero_table(double order, int count);

// Sum of 1/j_{order,k}^2 for k <= K. Orders in (-1, 0) are accepted here.
double rayleigh_partial_sum(double order, int K);

struct RayleighSum {
  double partial = 0.0;
  double tail = 0.0;        // integral estimate of the omitted terms
  double extrapolated = 0.0;
  double tail_bound = 0.0;  // bound on |extrapolated - limit|
};
RayleighSum rayleigh_sum(double order, int K);

struct MittagLeffler {
  double value = 0.0;  // partial + tail
  double partial = 0.0;
  double tail = 0.0;
  double tail_bound = 0.0;
  int terms = 0;
};
// Series sum_k 2t/(j_{order,k}^2 - t^2), which equals J_{order+1}(t)/J_order(t)
// for |t| < j_{order,1}.
MittagLeffler mittag_leffler_ratio(double order, double t, int K = 10000);

// Volume of the Euclidean unit ball in R^n.
double omega(int n);

namespace detail {
// Unchecked evaluation for order > -1, t > 0.
long double bessel_j_ld(long double order, long double t);
// Zeros for order > -1.
std::vector<double> zeros_any_order(double order, int count);
}  // namespace detail

}  // namespace bpv
