#include "bpv/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bpv/error.hpp"
#include "bpv/quadrature.hpp"
#include "bpv/radial.hpp"
#include "bpv/specfun.hpp"

namespace bpv {
namespace {

double jv(double nu, double x) { return static_cast<double>(detail::bessel_j_ld(nu, x)); }

struct HEval {
  double alpha;
  int n;
  double j;
  double kappa;  // (n-2)/2 - alpha, 0 for the reduced n = 2 form

  HEval(double a, int dim) : alpha(a), n(dim), j(bessel_zero(a, 1)), kappa(dim == 2 ? 0.0 : 0.5 * (dim - 2) - a) {}

  double operator()(double t) const {
    const double x = j * t;
    const double j0 = jv(alpha, x), j1 = jv(alpha + 1, x);
    if (kappa == 0.0) return j1 * j1 - j0 * j0;
    const double jp = -j1 + alpha / x * j0;
    return j1 * j1 - 2.0 * kappa * jp * j0 / x - j0 * j0;
  }

  // Exponent of t = s^q that makes t*H smooth enough at 0.
  double substitution() const {
    if (kappa == 0.0 || alpha >= 1.0) return 1.0;
    return std::min(50.0, 1.0 / alpha);
  }
};

// int_0^1 g(t) dt through t = s^q.
double integrate_unit(const std::function<double(double)>& g, double q, double abs_tol,
                      const std::vector<double>& t_kinks = {}) {
  std::vector<double> s_kinks;
  for (double t : t_kinks)
    if (t > 0 && t < 1) s_kinks.push_back(std::pow(t, 1.0 / q));
  auto integrand = [&](double s) {
    if (q == 1.0) return g(s);
    const double t = std::pow(s, q);
    return g(t) * q * std::pow(s, q - 1.0);
  };
  return integrate(integrand, 0.0, 1.0, abs_tol, 1e-13, s_kinks, 100000).value;
}

double sphere_ratio(int n, double x) {
  if (x > M_PI) return sphere_ratio(n, M_PI) * std::pow(M_PI / x, n);
  const GaussRule& g = gauss_legendre(40);
  double s = 0.0;
  for (size_t i = 0; i < g.x.size(); ++i) {
    const double u = 0.5 * (1.0 + g.x[i]);
    const double z = x * u;
    const double sinc = z == 0.0 ? 1.0 : std::sin(z) / z;
    s += 0.5 * g.w[i] * std::pow(u, n - 1) * std::pow(sinc, n - 1);
  }
  return n * s;
}

void require_dim(int n) { require(n >= 2 && n <= 64, ErrorCode::InvalidArgument, "dimension n must be in [2,64]"); }

}  // namespace

// VolumeProfile ---------------------------------------------------------------

VolumeProfile VolumeProfile::euclidean(int n) {
  require_dim(n);
  VolumeProfile v;
  v.n_ = n;
  v.kind_ = VolumeKind::Euclidean;
  return v;
}

VolumeProfile VolumeProfile::scaled_flat(int n, double c) {
  require_dim(n);
  require(std::isfinite(c) && c > 0 && c <= 1, ErrorCode::InvalidArgument, "scaled-flat factor must lie in (0,1]");
  VolumeProfile v;
  v.n_ = n;
  v.kind_ = VolumeKind::ScaledFlat;
  v.c_ = c;
  return v;
}

VolumeProfile VolumeProfile::tabulated(int n, std::vector<double> rho, std::vector<double> vol) {
  require_dim(n);
  require(rho.size() == vol.size() && rho.size() >= 2, ErrorCode::InvalidArgument,
          "volume table needs at least two (rho, vol) rows");
  VolumeProfile v;
  v.n_ = n;
  v.kind_ = VolumeKind::Tabulated;
  const double w = omega(n);
  for (size_t i = 0; i < rho.size(); ++i) {
    require(std::isfinite(rho[i]) && rho[i] > 0, ErrorCode::InvalidArgument, "table radii must be positive");
    require(i == 0 || rho[i] > rho[i - 1], ErrorCode::InvalidArgument, "table radii must be strictly increasing");
    require(std::isfinite(vol[i]) && vol[i] > 0, ErrorCode::InvalidArgument, "table volumes must be positive");
    v.ratio_.push_back(vol[i] / (w * std::pow(rho[i], n)));
    if (i > 0)
      require(v.ratio_[i] <= v.ratio_[i - 1] * (1 + 1e-12), ErrorCode::InvalidArgument,
              "table violates Bishop-Gromov monotonicity: Vol/rho^n increases at rho = " + std::to_string(rho[i]));
  }
  v.rho_ = std::move(rho);
  const size_t m = v.rho_.size();
  std::vector<double> hk(m - 1), dk(m - 1);
  for (size_t k = 0; k + 1 < m; ++k) {
    hk[k] = v.rho_[k + 1] - v.rho_[k];
    dk[k] = (v.ratio_[k + 1] - v.ratio_[k]) / hk[k];
  }
  v.slope_.assign(m, 0.0);
  v.slope_[0] = dk[0];
  v.slope_[m - 1] = dk[m - 2];
  for (size_t k = 1; k + 1 < m; ++k) {
    if (dk[k - 1] * dk[k] <= 0) continue;
    const double w1 = 2 * hk[k] + hk[k - 1], w2 = hk[k] + 2 * hk[k - 1];
    v.slope_[k] = (w1 + w2) / (w1 / dk[k - 1] + w2 / dk[k]);
  }
  return v;
}

VolumeProfile VolumeProfile::sphere(int n, double radius) {
  require_dim(n);
  require(std::isfinite(radius) && radius > 0, ErrorCode::InvalidArgument, "sphere radius must be positive");
  VolumeProfile v;
  v.n_ = n;
  v.kind_ = VolumeKind::Sphere;
  v.scale_ = radius;
  return v;
}

VolumeProfile VolumeProfile::deficit(int n, DeficitShape shape, double amplitude, double scale, double exponent) {
  require_dim(n);
  require(std::isfinite(amplitude) && amplitude > 0 && amplitude <= 1, ErrorCode::InvalidArgument,
          "deficit amplitude must lie in (0,1]");
  require(std::isfinite(scale) && scale > 0, ErrorCode::InvalidArgument, "deficit scale must be positive");
  require(std::isfinite(exponent) && exponent > 0, ErrorCode::InvalidArgument, "deficit exponent must be positive");
  VolumeProfile v;
  v.n_ = n;
  v.kind_ = VolumeKind::Deficit;
  v.shape_ = shape;
  v.amp_ = amplitude;
  v.scale_ = scale;
  v.expo_ = exponent;
  return v;
}

double VolumeProfile::ratio(double rho) const {
  require(std::isfinite(rho) && rho > 0, ErrorCode::InvalidArgument, "radius must be positive");
  switch (kind_) {
    case VolumeKind::Euclidean: return 1.0;
    case VolumeKind::ScaledFlat: return c_;
    case VolumeKind::Sphere: return sphere_ratio(n_, rho / scale_);
    case VolumeKind::Deficit: {
      const double x = rho / scale_;
      double g = 0.0;
      switch (shape_) {
        case DeficitShape::Linear: g = std::min(x, 1.0); break;
        case DeficitShape::Power: g = std::min(std::pow(x, expo_), 1.0); break;
        case DeficitShape::Step: g = x >= 1.0 ? 1.0 : 0.0; break;
      }
      return 1.0 - amp_ * g;
    }
    case VolumeKind::Tabulated: {
      if (rho <= rho_.front()) return ratio_.front();
      if (rho >= rho_.back()) return ratio_.back();
      const size_t k = static_cast<size_t>(std::upper_bound(rho_.begin(), rho_.end(), rho) - rho_.begin()) - 1;
      const double h = rho_[k + 1] - rho_[k];
      const double t = (rho - rho_[k]) / h;
      const double t2 = t * t, t3 = t2 * t;
      return (2 * t3 - 3 * t2 + 1) * ratio_[k] + (t3 - 2 * t2 + t) * h * slope_[k] + (-2 * t3 + 3 * t2) * ratio_[k + 1] +
             (t3 - t2) * h * slope_[k + 1];
    }
  }
  return 1.0;
}

double VolumeProfile::volume(double rho) const {
  if (rho == 0.0) return 0.0;
  return omega(n_) * std::pow(rho, n_) * ratio(rho);
}

std::vector<double> VolumeProfile::kinks() const {
  switch (kind_) {
    case VolumeKind::Tabulated: return rho_;
    case VolumeKind::Sphere: return {M_PI * scale_};
    case VolumeKind::Deficit: return {scale_};
    default: return {};
  }
}

std::string VolumeProfile::describe() const {
  std::ostringstream o;
  o.precision(15);
  switch (kind_) {
    case VolumeKind::Euclidean: o << "euclid"; break;
    case VolumeKind::ScaledFlat: o << "scaled:" << c_; break;
    case VolumeKind::Tabulated: o << "table(" << rho_.size() << " rows)"; break;
    case VolumeKind::Sphere: o << "sphere:" << scale_; break;
    case VolumeKind::Deficit:
      if (shape_ == DeficitShape::Linear) o << "deficit-linear:" << amp_ << ":" << scale_;
      if (shape_ == DeficitShape::Power) o << "deficit-power:" << amp_ << ":" << scale_ << ":" << expo_;
      if (shape_ == DeficitShape::Step) o << "deficit-step:" << amp_ << ":" << scale_;
      break;
  }
  return o.str();
}

VolumeProfile read_volume_table(int n, const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open volume table: " + path);
  std::vector<double> rho, vol;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double a, b;
    if (!(ls >> a)) {
      std::string probe;
      std::istringstream blank(line);
      if (!(blank >> probe)) continue;
      require(lineno == 1, ErrorCode::Parse, "volume table line " + std::to_string(lineno) + " is not numeric");
      continue;
    }
    require(static_cast<bool>(ls >> b), ErrorCode::Parse, "volume table line " + std::to_string(lineno) + " needs two columns");
    rho.push_back(a);
    vol.push_back(b);
  }
  try {
    return VolumeProfile::tabulated(n, rho, vol);
  } catch (const Error& e) {
    fail(ErrorCode::Parse, std::string("volume table ") + path + ": " + e.what());
  }
}

VolumeProfile parse_volume_profile(int n, const std::string& text) {
  auto numbers = [&](const std::string& rest, size_t count) {
    std::vector<double> out;
    std::istringstream s(rest);
    std::string tok;
    while (std::getline(s, tok, ':')) {
      try {
        size_t used = 0;
        out.push_back(std::stod(tok, &used));
        require(used == tok.size(), ErrorCode::Parse, "bad number in profile spec: " + tok);
      } catch (const std::logic_error&) {
        fail(ErrorCode::Parse, "bad number in profile spec: " + tok);
      }
    }
    require(out.size() == count, ErrorCode::Parse, "profile spec '" + text + "' has the wrong number of parameters");
    return out;
  };
  if (text == "euclid") return VolumeProfile::euclidean(n);
  const size_t colon = text.find(':');
  require(colon != std::string::npos, ErrorCode::Parse, "unknown volume profile: " + text);
  const std::string head = text.substr(0, colon), rest = text.substr(colon + 1);
  if (head == "table") return read_volume_table(n, rest);
  if (head == "scaled") return VolumeProfile::scaled_flat(n, numbers(rest, 1)[0]);
  if (head == "sphere") return VolumeProfile::sphere(n, numbers(rest, 1)[0]);
  if (head == "deficit-linear") {
    const auto v = numbers(rest, 2);
    return VolumeProfile::deficit(n, DeficitShape::Linear, v[0], v[1]);
  }
  if (head == "deficit-power") {
    const auto v = numbers(rest, 3);
    return VolumeProfile::deficit(n, DeficitShape::Power, v[0], v[1], v[2]);
  }
  if (head == "deficit-step") {
    const auto v = numbers(rest, 2);
    return VolumeProfile::deficit(n, DeficitShape::Step, v[0], v[1]);
  }
  fail(ErrorCode::Parse, "unknown volume profile: " + text);
}

// H_alpha ---------------------------------------------------------------------

double h_alpha(double alpha, int n, double t) {
  require_admissible(alpha, n);
  require(std::isfinite(t) && t > 0 && t <= 1.0, ErrorCode::Domain, "t must lie in (0,1]");
  return HEval(alpha, n)(t);
}

HAlphaZero h_alpha_zero(double alpha, int n) {
  require_admissible(alpha, n);
  const HEval H(alpha, n);
  constexpr int kScan = 1000;
  std::vector<double> v(kScan + 1);
  for (int i = 1; i <= kScan; ++i) v[i] = H(static_cast<double>(i) / kScan);
  HAlphaZero out;
  int left = -1;
  for (int i = 1; i < kScan; ++i) {
    if ((v[i] < 0) != (v[i + 1] < 0)) {
      ++out.sign_changes;
      left = i;
    }
  }
  if (out.sign_changes != 1 || !(v[1] < 0) || !(v[kScan] > 0))
    fail(ErrorCode::Internal, "H_alpha scan found " + std::to_string(out.sign_changes) +
                                  " sign changes; a unique negative-to-positive change is required");
  double a = static_cast<double>(left) / kScan, b = static_cast<double>(left + 1) / kScan;
  for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    if (H(m) < 0)
      a = m;
    else
      b = m;
  }
  out.t0 = 0.5 * (a + b);
  out.value = H(out.t0);
  return out;
}

double integral_identity(double alpha, int n) {
  require_admissible(alpha, n);
  const HEval H(alpha, n);
  return integrate_unit([&](double t) { return t * H(t); }, H.substitution(), 1e-15);
}

IdentityTerms integral_identity_terms(double alpha, int n) {
  require_admissible(alpha, n);
  const HEval H(alpha, n);
  const double j = H.j, a = alpha;
  const double q = a > 0 && a < 1 ? std::min(50.0, 1.0 / a) : 1.0;
  IdentityTerms r;
  r.next_sq = integrate_unit([&](double t) { const double v = jv(a + 1, j * t); return t * v * v; }, 1.0, 1e-15);
  r.same_sq = integrate_unit([&](double t) { const double v = jv(a, j * t); return t * v * v; }, 1.0, 1e-15);
  r.cross = integrate_unit(
      [&](double t) {
        const double x = j * t, j0 = jv(a, x);
        return j0 * (-jv(a + 1, x) + a / x * j0);
      },
      q, 1e-15);
  const double jn = jv(a + 1, j);
  r.next_sq_exact = 0.5 * jn * jn;
  r.cross_exact = a == 0.0 ? -1.0 / (2 * j) : 0.0;
  // J_{-1} = -J_1; other orders below 1 stay in (-1, 0) where the evaluator is valid.
  const double jprev = a == 0.0 ? -jv(1.0, j) : static_cast<double>(detail::bessel_j_ld(a - 1, j));
  r.same_sq_exact = -0.5 * jprev * jn;
  return r;
}

// Monotonicity ------------------------------------------------------------------

double monotone_function(int which, double alpha, int n, double beta, double t) {
  const double j = bessel_zero(alpha, 1);
  const double x = j * t;
  const double ja = jv(alpha, x), jb = jv(alpha + 1, x);
  switch (which) {
    case 1: return std::pow(t, beta - n) * ja * ja;
    case 2: return std::pow(t, 1 - n) * ja * jb;
    case 3: return std::pow(t, 2 - n) * jb * (jb - (n + 2 * alpha) / x * ja);
  }
  fail(ErrorCode::InvalidArgument, "monotone function index must be 1, 2 or 3");
}

double monotone_check(int which, double alpha, int n, double beta) {
  require(which >= 1 && which <= 3, ErrorCode::InvalidArgument, "monotone function index must be 1, 2 or 3");
  require(n >= 2 && std::isfinite(alpha) && alpha >= 0 && alpha <= 0.5 * (n - 2),
          ErrorCode::Domain, "alpha must lie in [0, (n-2)/2]");
  if (which == 1)
    require(std::isfinite(beta) && beta >= 0 && beta <= 2, ErrorCode::Domain, "beta must lie in [0,2]");
  constexpr int kGrid = 10000;
  const double dir = which == 3 ? -1.0 : 1.0;  // h3 must not decrease
  double prev = monotone_function(which, alpha, n, beta, 1.0 / kGrid);
  double worst = 0.0;
  for (int i = 2; i <= kGrid; ++i) {
    const double cur = monotone_function(which, alpha, n, beta, static_cast<double>(i) / kGrid);
    const double rise = dir * (cur - prev);
    if (rise > 0) worst = std::max(worst, rise / std::max(std::abs(cur), std::abs(prev)));
    prev = cur;
  }
  return worst;
}

// Layer cake and rigidity ---------------------------------------------------------

double layer_cake_integral(const VolumeProfile& vp, const std::vector<double>& rho, const std::vector<double>& f,
                           double r) {
  require(rho.size() == f.size() && rho.size() >= 2, ErrorCode::InvalidArgument, "f needs at least two nodes");
  require(std::isfinite(r) && r > 0, ErrorCode::InvalidArgument, "r must be positive");
  require(std::abs(rho.back() - r) <= 1e-12 * r, ErrorCode::InvalidArgument, "last node of f must be r");
  double fmax = 0.0;
  for (size_t i = 0; i < rho.size(); ++i) {
    require(std::isfinite(rho[i]) && std::isfinite(f[i]), ErrorCode::InvalidArgument, "f must be finite");
    require(rho[i] > 0 && (i == 0 || rho[i] > rho[i - 1]), ErrorCode::InvalidArgument, "nodes must increase from > 0");
    fmax = std::max(fmax, std::abs(f[i]));
  }
  for (size_t i = 0; i + 1 < rho.size(); ++i)
    require(f[i + 1] <= f[i] + 1e-14 * fmax, ErrorCode::InvalidArgument,
            "f increases on [" + std::to_string(rho[i]) + ", " + std::to_string(rho[i + 1]) + "]");
  require(std::abs(f.back()) <= 1e-12 * std::max(fmax, 1e-300), ErrorCode::InvalidArgument, "f(r) must be 0");
  const GaussRule& g = gauss_legendre(8);
  const std::vector<double> kinks = vp.kinks();
  KahanSum total;
  for (size_t i = 0; i + 1 < rho.size(); ++i) {
    const double slope = (f[i + 1] - f[i]) / (rho[i + 1] - rho[i]);
    if (slope == 0.0) continue;
    std::vector<double> cuts{rho[i]};
    for (double k : kinks)
      if (k > rho[i] && k < rho[i + 1]) cuts.push_back(k);
    cuts.push_back(rho[i + 1]);
    double seg = 0.0;
    for (size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double a = cuts[c], b = cuts[c + 1];
      for (size_t q = 0; q < g.x.size(); ++q) seg += 0.5 * (b - a) * g.w[q] * vp.volume(0.5 * (a + b) + 0.5 * (b - a) * g.x[q]);
    }
    total.add(-slope * seg);
  }
  return total.value();
}

double rigidity_functional(const VolumeProfile& vp, double alpha, int n, double r) {
  require_admissible(alpha, n);
  require(vp.dim() == n, ErrorCode::InvalidArgument, "volume profile dimension does not match n");
  require(std::isfinite(r) && r > 0, ErrorCode::InvalidArgument, "r must be positive");
  const HEval H(alpha, n);
  const double scale = omega(n) * std::pow(r, n);
  std::vector<double> t_kinks;
  for (double k : vp.kinks()) t_kinks.push_back(k / r);
  const double v = integrate_unit([&](double t) { return vp.ratio(r * t) * t * H(t); }, H.substitution(), 1e-15,
                                  t_kinks);
  return scale * v;
}

VerdictReport rigidity_verdict(const VolumeProfile& vp, double alpha, int n, double r) {
  require_admissible(alpha, n);
  require(vp.dim() == n, ErrorCode::InvalidArgument, "volume profile dimension does not match n");
  require(std::isfinite(r) && r > 0, ErrorCode::InvalidArgument, "r must be positive");
  VerdictReport rep;
  rep.tolerance = 1e-6 * omega(n) * std::pow(r, n);
  const double at_zero = vp.ratio(1e-8 * r);
  require(std::abs(at_zero - 1.0) <= 1e-6, ErrorCode::InvalidArgument,
          "rejected input: Vol(rho)/(omega_n rho^n) must tend to 1 as rho -> 0 (found " + std::to_string(at_zero) + ")");
  constexpr int kScan = 2000;
  double prev = at_zero;
  for (int i = 1; i <= kScan; ++i) {
    const double cur = vp.ratio(r * i / kScan);
    require(cur <= prev * (1 + 1e-12) + 1e-15, ErrorCode::InvalidArgument,
            "rejected input: Vol(rho)/rho^n increases near rho = " + std::to_string(r * i / kScan));
    rep.max_deviation = std::max(rep.max_deviation, std::abs(cur - 1.0));
    prev = cur;
  }
  rep.functional = rigidity_functional(vp, alpha, n, r);
  rep.t0 = h_alpha_zero(alpha, n).t0;
  if (rep.functional >= -rep.tolerance && rep.max_deviation <= rep.tolerance) {
    rep.verdict = Verdict::Flat;
    return rep;
  }
  if (rep.functional >= rep.tolerance)
    fail(ErrorCode::Internal, "non-flat profile with positive rigidity functional contradicts the Bessel rigidity lemma");
  rep.verdict = Verdict::BpvViolated;
  return rep;
}

}  // namespace bpv
