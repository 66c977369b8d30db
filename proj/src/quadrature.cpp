#include "bpv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>

#include "bpv/error.hpp"

namespace bpv {
namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double hl = 0.5 * (b - a);
  const double fc = f(c);
  double rk = fc * kWgk[7];
  double rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = hl * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    rk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) rg += kWg[j / 2] * (f1 + f2);
  }
  Panel p{a, b, rk * hl, std::abs((rk - rg) * hl)};
  if (!std::isfinite(p.value)) fail(ErrorCode::NoConvergence, "integrand is not finite on a quadrature panel");
  return p;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                     double rel_tol, const std::vector<double>& breakpoints, int max_panels) {
  QuadResult out;
  if (a == b) return out;
  if (a > b) {
    out = integrate(f, b, a, abs_tol, rel_tol, breakpoints, max_panels);
    out.value = -out.value;
    return out;
  }
  std::vector<double> cuts{a};
  for (double x : breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.push_back(b);

  std::priority_queue<Panel> heap;
  double total = 0.0, err = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    Panel p = gk15(f, cuts[i], cuts[i + 1]);
    out.evaluations += 15;
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  int panels = static_cast<int>(heap.size());
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (panels >= max_panels) fail(ErrorCode::NoConvergence, "adaptive quadrature exceeded its panel budget");
    Panel p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) {
      // Panel can no longer be split in double precision; accept it as is.
      err -= p.error;
      p.error = 0.0;
      heap.push(p);
      if (heap.top().error == 0.0) break;
      continue;
    }
    Panel l = gk15(f, p.a, m);
    Panel r = gk15(f, m, p.b);
    out.evaluations += 30;
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
    ++panels;
  }
  // Re-sum from the panels to drop accumulated update roundoff.
  KahanSum s, e;
  while (!heap.empty()) {
    s.add(heap.top().value);
    e.add(heap.top().error);
    heap.pop();
  }
  out.value = s.value();
  out.error = e.value();
  return out;
}

const GaussRule& gauss_legendre(int points) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  require(points >= 1 && points <= 512, ErrorCode::InvalidArgument, "Gauss-Legendre order must be in [1,512]");
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(points);
  if (it != cache.end()) return it->second;
  GaussRule rule;
  rule.x.resize(points);
  rule.w.resize(points);
  const int n = points;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    long double pp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      long double p1 = 1, p2 = 0;
      for (int j = 1; j <= n; ++j) {
        const long double p3 = p2;
        p2 = p1;
        p1 = ((2.0L * j - 1) * z * p2 - (j - 1.0L) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1);
      const long double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-19L) break;
    }
    rule.x[i] = static_cast<double>(-z);
    rule.x[n - 1 - i] = static_cast<double>(z);
    const double w = static_cast<double>(2.0L / ((1 - z * z) * pp * pp));
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  return cache.emplace(points, std::move(rule)).first->second;
}

}  // namespace bpv
