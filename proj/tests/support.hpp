#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "bpv/grid.hpp"
#include "bpv/norm.hpp"

namespace bpv_test {

// Random sine series on [-1,1]^2 clipped at zero, vanishing on the outer cells.
inline bpv::GridFunction random_grid(int S, std::mt19937_64& rng, int modes = 4) {
  bpv::GridFunction g = bpv::centered_grid(2, {S, S}, 2.0 / S);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> c(modes * modes);
  for (double& v : c) v = U(rng) / 3.0;
  c[0] = 1.0;
  double x[2];
  int idx[2];
  for (size_t k = 0; k < g.size(); ++k) {
    g.unflatten(k, idx);
    if (idx[0] == 0 || idx[1] == 0 || idx[0] == S - 1 || idx[1] == S - 1) continue;
    g.center(k, x);
    double v = 0.0;
    for (int a = 0; a < modes; ++a)
      for (int b = 0; b < modes; ++b)
        v += c[a * modes + b] * std::sin((a + 1) * M_PI * (x[0] + 1) / 2) * std::sin((b + 1) * M_PI * (x[1] + 1) / 2);
    g.values[k] = std::max(v, 0.0);
  }
  return g;
}

// Largest Euclidean radius of the unit ball of the norm (n = 2).
inline double ball_extent(const bpv::Norm& f) {
  double ext = 0.0;
  for (int a = 0; a < 3600; ++a) {
    const double e[2] = {std::cos(a * M_PI / 1800), std::sin(a * M_PI / 1800)};
    ext = std::max(ext, 1.0 / f.eval(e));
  }
  return ext;
}

// phi(F(x)) sampled at cell centers; phi is applied only where F < 1.
template <class Phi>
bpv::GridFunction radial_grid(const bpv::NormSpec& spec, int S, double box, Phi phi) {
  const bpv::Norm f(spec);
  bpv::GridFunction g = bpv::centered_grid(spec.n, std::vector<int>(spec.n, S), box / S);
  std::vector<double> x(spec.n);
  for (size_t k = 0; k < g.size(); ++k) {
    g.center(k, x.data());
    const double F = f.eval(x.data());
    if (F < 1.0) g.values[k] = phi(F);
  }
  return g;
}

}  // namespace bpv_test
