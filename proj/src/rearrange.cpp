#include "bpv/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bpv/error.hpp"
#include "bpv/quadrature.hpp"

namespace bpv {
namespace {

struct Target {
  double f;
  std::vector<int> key;  // signed half-offsets, centers are (key + 1/2) h
  size_t flat;
};

bool target_less(const Target& a, const Target& b) {
  if (a.f != b.f) return a.f < b.f;
  return a.key < b.key;
}

}  // namespace

GridFunction symmetrize(const GridFunction& u, const NormSpec& spec) {
  validate(u);
  require(!u.values.empty(), ErrorCode::InvalidArgument, "grid has no values");
  require(spec.n == u.n, ErrorCode::InvalidArgument, "norm dimension does not match the grid");
  const Norm norm(spec);
  const int n = u.n;

  std::vector<double> vals;
  for (double v : u.values)
    if (v > 0) vals.push_back(v);
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  const size_t count = vals.size();

  std::vector<int> shape(n);
  for (int k = 0; k < n; ++k) shape[k] = u.shape[k] + (u.shape[k] % 2);
  for (int grow = 0; grow < 100000; ++grow) {
    GridFunction out = centered_grid(n, shape, u.h);
    if (count == 0) return out;
    std::vector<Target> cells(out.size());
    int idx[16];
    double x[16];
    for (size_t f = 0; f < cells.size(); ++f) {
      out.unflatten(f, idx);
      cells[f].key.resize(n);
      for (int k = 0; k < n; ++k) {
        cells[f].key[k] = idx[k] - shape[k] / 2;
        x[k] = (cells[f].key[k] + 0.5) * u.h;
      }
      cells[f].f = norm.eval(x);
      cells[f].flat = f;
    }
    if (count < cells.size()) {
      std::nth_element(cells.begin(), cells.begin() + static_cast<long>(count), cells.end(), target_less);
      std::sort(cells.begin(), cells.begin() + static_cast<long>(count), target_less);
    } else {
      std::sort(cells.begin(), cells.end(), target_less);
    }
    bool fits = count < cells.size();
    for (size_t i = 0; fits && i < count; ++i) {
      out.unflatten(cells[i].flat, idx);
      for (int k = 0; k < n; ++k)
        if (idx[k] == 0 || idx[k] == shape[k] - 1) fits = false;
    }
    if (!fits) {
      for (int k = 0; k < n; ++k) shape[k] += 2;
      continue;
    }
    for (size_t i = 0; i < count; ++i) out.values[cells[i].flat] = vals[i];
    return out;
  }
  fail(ErrorCode::Internal, "symmetrization lattice did not converge");
}

double discrete_mass(const GridFunction& u) {
  std::vector<double> sq(u.values.size());
  for (size_t i = 0; i < sq.size(); ++i) sq[i] = u.values[i] * u.values[i];
  std::sort(sq.begin(), sq.end());
  double s = 0.0;
  for (double v : sq) s += v;
  return s * u.cell_volume();
}

double discrete_hardy(const GridFunction& u, const Norm& norm) {
  require(norm.dim() == u.n, ErrorCode::InvalidArgument, "norm dimension does not match the grid");
  const long long skip = origin_cell(u);
  KahanSum s;
  double x[16];
  for (size_t f = 0; f < u.values.size(); ++f) {
    const double v = u.values[f];
    if (v == 0.0 || static_cast<long long>(f) == skip) continue;
    u.center(f, x);
    const double d = norm.eval(x);
    if (d == 0.0) continue;
    s.add(v * v / (d * d));
  }
  return s.value() * u.cell_volume();
}

double discrete_dirichlet(const GridFunction& u, const Norm& norm) {
  require(norm.dim() == u.n, ErrorCode::InvalidArgument, "norm dimension does not match the grid");
  const int n = u.n;
  std::vector<size_t> stride(n);
  stride[n - 1] = 1;
  for (int k = n - 2; k >= 0; --k) stride[k] = stride[k + 1] * static_cast<size_t>(u.shape[k + 1]);
  KahanSum s;
  int idx[16];
  double g[16];
  for (size_t f = 0; f < u.values.size(); ++f) {
    u.unflatten(f, idx);
    bool any = false;
    for (int k = 0; k < n; ++k) {
      const double next = idx[k] + 1 < u.shape[k] ? u.values[f + stride[k]] : 0.0;
      g[k] = (next - u.values[f]) / u.h;
      any = any || g[k] != 0.0;
    }
    if (!any) continue;
    const double fs = norm.polar(g);
    s.add(fs * fs);
  }
  // Cells just below the lattice see a jump from 0 to the first layer.
  for (int k = 0; k < n; ++k) {
    for (size_t f = 0; f < u.values.size(); ++f) {
      u.unflatten(f, idx);
      if (idx[k] != 0 || u.values[f] == 0.0) continue;
      for (int j = 0; j < n; ++j) g[j] = 0.0;
      g[k] = u.values[f] / u.h;
      const double fs = norm.polar(g);
      s.add(fs * fs);
    }
  }
  return s.value() * u.cell_volume();
}

RearrangeReport rearrange_report(const GridFunction& u, const NormSpec& spec, double slack_constant) {
  const GridFunction s = symmetrize(u, spec);
  const Norm norm(spec);
  RearrangeReport r;
  r.mass_in = discrete_mass(u);
  r.mass_out = discrete_mass(s);
  r.hardy_in = discrete_hardy(u, norm);
  r.hardy_out = discrete_hardy(s, norm);
  r.dirichlet_in = discrete_dirichlet(u, norm);
  r.dirichlet_out = discrete_dirichlet(s, norm);
  r.slack = slack_constant * u.h;
  r.cavalieri = r.mass_in == r.mass_out;
  r.hardy_littlewood = r.hardy_out >= r.hardy_in - 1e-9 * std::max(r.hardy_in, r.hardy_out);
  r.polya_szego = r.dirichlet_out <= r.dirichlet_in * (1.0 + r.slack);
  return r;
}

RearrangeReport cavalieri_check(const GridFunction& u, const NormSpec& spec) {
  const GridFunction s = symmetrize(u, spec);
  RearrangeReport r;
  r.mass_in = discrete_mass(u);
  r.mass_out = discrete_mass(s);
  r.cavalieri = r.mass_in == r.mass_out;
  return r;
}

RearrangeReport hardy_littlewood_check(const GridFunction& u, const NormSpec& spec) {
  const GridFunction s = symmetrize(u, spec);
  const Norm norm(spec);
  RearrangeReport r;
  r.hardy_in = discrete_hardy(u, norm);
  r.hardy_out = discrete_hardy(s, norm);
  r.hardy_littlewood = r.hardy_out >= r.hardy_in - 1e-9 * std::max(r.hardy_in, r.hardy_out);
  return r;
}

RearrangeReport polya_szego_check(const GridFunction& u, const NormSpec& spec, double slack_constant) {
  validate(u);
  require(boundary_vanishing(u), ErrorCode::InvalidArgument, "Polya-Szego check needs a boundary-vanishing grid function");
  const GridFunction s = symmetrize(u, spec);
  const Norm norm(spec);
  RearrangeReport r;
  r.dirichlet_in = discrete_dirichlet(u, norm);
  r.dirichlet_out = discrete_dirichlet(s, norm);
  r.slack = slack_constant * u.h;
  r.polya_szego = r.dirichlet_out <= r.dirichlet_in * (1.0 + r.slack);
  return r;
}

double hardy_inequality_check(const GridFunction& u, const NormSpec& spec) {
  validate(u);
  require(u.n >= 3, ErrorCode::Domain, "the Hardy inequality check needs n >= 3");
  require(boundary_vanishing(u), ErrorCode::InvalidArgument, "Hardy check needs a boundary-vanishing grid function");
  const Norm norm(spec);
  const double hardy = discrete_hardy(u, norm);
  require(hardy > 0, ErrorCode::InvalidArgument, "Hardy integral vanishes");
  return discrete_dirichlet(u, norm) / hardy;
}

}  // namespace bpv
