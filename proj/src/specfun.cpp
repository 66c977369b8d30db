#include "bpv/specfun.hpp"

#include <cfloat>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "bpv/error.hpp"
#include "bpv/quadrature.hpp"

namespace bpv {
namespace {

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

long double series_j(long double nu, long double t) {
  const long double half = t / 2;
  long double term = std::exp(nu * std::log(half) - std::lgamma(nu + 1));
  long double sum = term;
  long double peak = std::abs(term);
  const long double q = -half * half;
  for (int k = 1; k < 1000; ++k) {
    term *= q / (k * (k + nu));
    sum += term;
    peak = std::max(peak, std::abs(term));
    if (k > half && std::abs(term) < LDBL_EPSILON * 1e-3L * peak) break;
  }
  return sum;
}

// Hankel asymptotic expansion. Stops at the smallest term.
long double hankel_j(long double nu, long double t) {
  const long double mu = 4 * nu * nu;
  long double p = 1, q = 0;
  long double term = 1;
  long double last = 1;
  for (int k = 1; k < 200; ++k) {
    const long double odd = 2.0L * k - 1;
    term *= (mu - odd * odd) / (k * 8 * t);
    if (std::abs(term) > std::abs(last) && k > 2) break;
    last = term;
    // a_k/t^k enters P with sign (-1)^{k/2} for even k and Q with (-1)^{(k-1)/2} for odd k.
    switch (k % 4) {
      case 0: p += term; break;
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
    }
    if (std::abs(term) < LDBL_EPSILON * 1e-2L) break;
  }
  const long double w = t - (nu / 2 + 0.25L) * kPiL;
  return std::sqrt(2 / (kPiL * t)) * (p * std::cos(w) - q * std::sin(w));
}

// Steed's continued-fraction method (CF1 + CF2) for nu >= 0, t >= 2.
long double steed_j(long double xnu, long double x) {
  constexpr long double kEps = 1e-19L;
  constexpr long double kFpmin = 1e-4000L;
  constexpr int kMaxit = 1000000;
  const int nl = static_cast<int>(xnu + 0.5L);
  const long double xmu = xnu - nl;
  const long double xmu2 = xmu * xmu;
  const long double xi = 1 / x;
  const long double xi2 = 2 * xi;
  const long double w = xi2 / kPiL;
  int isign = 1;
  long double h = xnu * xi;
  if (h < kFpmin) h = kFpmin;
  long double b = xi2 * xnu, d = 0, c = h;
  int i = 1;
  for (; i <= kMaxit; ++i) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < kFpmin) d = kFpmin;
    c = b - 1 / c;
    if (std::abs(c) < kFpmin) c = kFpmin;
    d = 1 / d;
    const long double del = c * d;
    h = del * h;
    if (d < 0) isign = -isign;
    if (std::abs(del - 1) < kEps) break;
  }
  if (i > kMaxit) fail(ErrorCode::NoConvergence, "Bessel CF1 did not converge");
  long double rjl = isign * 1e-30L;
  long double rjpl = h * rjl;
  const long double rjl1 = rjl;
  long double fact = xnu * xi;
  for (int l = nl - 1; l >= 0; --l) {
    const long double rjtemp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * rjtemp - rjl;
    rjl = rjtemp;
  }
  if (rjl == 0) rjl = kEps;
  const long double f = rjpl / rjl;
  long double a = 0.25L - xmu2;
  long double p = -0.5L * xi;
  long double q = 1;
  const long double br = 2 * x;
  long double bi = 2;
  fact = a * xi / (p * p + q * q);
  long double cr = br + q * fact;
  long double ci = bi + p * fact;
  long double den = br * br + bi * bi;
  long double dr = br / den;
  long double di = -bi / den;
  long double dlr = cr * dr - ci * di;
  long double dli = cr * di + ci * dr;
  long double temp = p * dlr - q * dli;
  q = p * dli + q * dlr;
  p = temp;
  for (i = 2; i <= kMaxit; ++i) {
    a += 2 * (i - 1);
    bi += 2;
    dr = a * dr + br;
    di = a * di + bi;
    if (std::abs(dr) + std::abs(di) < kFpmin) dr = kFpmin;
    fact = a / (cr * cr + ci * ci);
    cr = br + cr * fact;
    ci = bi - ci * fact;
    if (std::abs(cr) + std::abs(ci) < kFpmin) cr = kFpmin;
    den = dr * dr + di * di;
    dr /= den;
    di = -di / den;
    dlr = cr * dr - ci * di;
    dli = cr * di + ci * dr;
    temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    if (std::abs(dlr - 1) + std::abs(dli) < kEps) break;
  }
  if (i > kMaxit) fail(ErrorCode::NoConvergence, "Bessel CF2 did not converge");
  const long double gam = (p - f) / q;
  long double rjmu = std::sqrt(w / ((p - f) * gam + q));
  if (rjl < 0) rjmu = -rjmu;
  return rjl1 * (rjmu / rjl);
}

bool hankel_regime(long double nu, long double t) { return t >= 25 + nu * nu / 2; }

void check_finite(double v, const char* what) {
  require(std::isfinite(v), ErrorCode::InvalidArgument, std::string(what) + " must be finite");
}

}  // namespace

namespace detail {

long double bessel_j_ld(long double nu, long double t) {
  if (t == 0) return nu == 0 ? 1.0L : 0.0L;
  if (t <= std::max(12.0L, 2 * std::sqrt(nu + 1))) return series_j(nu, t);
  if (hankel_regime(nu, t)) return hankel_j(nu, t);
  if (nu >= 0) return steed_j(nu, t);
  // -1 < nu < 0: forward recurrence from nu+1, nu+2 (stable for t > nu).
  const long double j1 = steed_j(nu + 1, t);
  const long double j2 = steed_j(nu + 2, t);
  return 2 * (nu + 1) / t * j1 - j2;
}

namespace {

std::mutex g_zero_mu;
std::map<double, std::vector<double>> g_zero_cache;

double j_at(double nu, double t) { return static_cast<double>(bessel_j_ld(nu, t)); }

double jp_at(double nu, double t) {
  return static_cast<double>(-bessel_j_ld(nu + 1, t) + nu / static_cast<long double>(t) * bessel_j_ld(nu, t));
}

// Safeguarded Newton inside [a,b] where J changes sign.
double refine_zero(double nu, double a, double b, double fa) {
  double x = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    const double fx = j_at(nu, x);
    if (fx == 0) return x;
    if ((fx > 0) == (fa > 0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
    }
    const double d = jp_at(nu, x);
    double xn = x - fx / d;
    if (!(xn > a && xn < b) || !std::isfinite(xn)) xn = 0.5 * (a + b);
    const double step = std::abs(xn - x);
    x = xn;
    if (step <= 4 * DBL_EPSILON * x || b - a <= 4 * DBL_EPSILON * x) break;
  }
  if (!(x >= a && x <= b)) fail(ErrorCode::NoConvergence, "Bessel zero left its bracket");
  const double res = std::abs(j_at(nu, x));
  if (res > 1e-11) fail(ErrorCode::NoConvergence, "Bessel zero refinement did not reach residual 1e-11");
  return x;
}

void extend_zeros(double nu, std::vector<double>& zs, int count) {
  constexpr double kStep = 0.5;
  while (static_cast<int>(zs.size()) < count) {
    double a;
    double fa;
    if (zs.empty()) {
      // J_nu > 0 on (0, j_{nu,1}) and j_{nu,1} > nu.
      a = std::max(nu, 0.0);
      fa = 1.0;
    } else {
      a = zs.back() + 1e-3;
      fa = j_at(nu, a);
      if (fa == 0) fa = -jp_at(nu, zs.back());
    }
    bool found = false;
    for (int s = 0; s < 100000; ++s) {
      const double b = a + kStep;
      const double fb = j_at(nu, b);
      if (fb == 0) {
        zs.push_back(b);
        found = true;
        break;
      }
      if ((fb > 0) != (fa > 0)) {
        zs.push_back(refine_zero(nu, a, b, fa));
        found = true;
        break;
      }
      a = b;
      fa = fb;
    }
    if (!found) fail(ErrorCode::NoConvergence, "no sign change found while scanning for a Bessel zero");
  }
}

}  // namespace

std::vector<double> zeros_any_order(double nu, int count) {
  require(nu > -1 && std::isfinite(nu), ErrorCode::Domain, "Bessel order must exceed -1");
  require(count >= 1, ErrorCode::InvalidArgument, "zero count must be positive");
  std::vector<double> local;
  {
    std::lock_guard<std::mutex> lock(g_zero_mu);
    auto it = g_zero_cache.find(nu);
    if (it != g_zero_cache.end()) {
      if (static_cast<int>(it->second.size()) >= count)
        return std::vector<double>(it->second.begin(), it->second.begin() + count);
      local = it->second;
    }
  }
  extend_zeros(nu, local, count);
  std::lock_guard<std::mutex> lock(g_zero_mu);
  auto& slot = g_zero_cache[nu];
  if (slot.size() < local.size()) slot = local;
  if (g_zero_cache.size() > 256) g_zero_cache.clear();
  return std::vector<double>(local.begin(), local.begin() + count);
}

}  // namespace detail

double bessel_j(double order, double t) {
  check_finite(order, "order");
  check_finite(t, "t");
  require(order >= 0, ErrorCode::Domain, "Bessel order must be nonnegative");
  require(t >= 0, ErrorCode::Domain, "Bessel argument must be nonnegative");
  return static_cast<double>(detail::bessel_j_ld(order, t));
}

double bessel_j_prime(double order, double t) {
  check_finite(order, "order");
  check_finite(t, "t");
  require(order >= 0, ErrorCode::Domain, "Bessel order must be nonnegative");
  require(t >= 0, ErrorCode::Domain, "Bessel argument must be nonnegative");
  if (t == 0) {
    require(order >= 1, ErrorCode::Domain, "derivative at t = 0 needs order >= 1");
    return order == 1 ? 0.5 : 0.0;
  }
  const long double tl = t;
  return static_cast<double>(-detail::bessel_j_ld(order + 1.0L, tl) + order / tl * detail::bessel_j_ld(order, tl));
}

double bessel_zero(double order, int k) {
  check_finite(order, "order");
  require(order >= 0, ErrorCode::Domain, "Bessel order must be nonnegative");
  require(k >= 1, ErrorCode::InvalidArgument, "zero index must be >= 1");
  return detail::zeros_any_order(order, k).back();
}

ZeroTable zero_table(double order, int count) {
  check_finite(order, "order");
  require(order >= 0, ErrorCode::Domain, "Bessel order must be nonnegative");
  ZeroTable z;
  z.alpha = order;
  z.zeros = detail::zeros_any_order(order, count);
  return z;
}

double rayleigh_partial_sum(double order, int K) {
  const auto zs = detail::zeros_any_order(order, K);
  KahanSum s;
  for (int k = K - 1; k >= 0; --k) s.add(1.0 / (zs[k] * zs[k]));
  return s.value();
}

RayleighSum rayleigh_sum(double order, int K) {
  RayleighSum r;
  r.partial = rayleigh_partial_sum(order, K);
  const double pi2 = M_PI * M_PI;
  r.tail = 1.0 / (pi2 * (K + order / 2 + 0.25));
  r.extrapolated = r.partial + r.tail;
  const double mu = 4 * order * order;
  r.tail_bound = (1.0 + std::abs(mu - 1)) / (pi2 * std::pow(static_cast<double>(K), 3));
  return r;
}

MittagLeffler mittag_leffler_ratio(double order, double t, int K) {
  check_finite(order, "order");
  check_finite(t, "t");
  require(order > 0, ErrorCode::Domain, "Mittag-Leffler expansion needs a positive order");
  require(K >= 1, ErrorCode::InvalidArgument, "term count must be positive");
  const auto zs = detail::zeros_any_order(order, K);
  require(std::abs(t) < zs[0], ErrorCode::Domain, "Mittag-Leffler expansion needs |t| < j_{order,1}");
  MittagLeffler m;
  KahanSum s;
  for (int k = K - 1; k >= 0; --k) s.add(2 * t / (zs[k] * zs[k] - t * t));
  m.partial = s.value();
  const double pi2 = M_PI * M_PI;
  m.tail = 2 * t / (pi2 * (K + order / 2 + 0.25));
  m.value = m.partial + m.tail;
  const double mu = 4 * order * order;
  m.tail_bound = 2 * std::abs(t) * (1.0 + std::abs(mu - 1) + t * t) / (pi2 * std::pow(static_cast<double>(K), 3));
  m.terms = K;
  return m;
}

double omega(int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

}  // namespace bpv
