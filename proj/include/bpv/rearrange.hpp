#pragma once

#include "bpv/grid.hpp"
#include "bpv/norm.hpp"

namespace bpv {

// Default constant in the discretization slack eps_h = C*h.
inline constexpr double kSlackConstant = 10.0;

// Anisotropic decreasing rearrangement by sort-and-reassign. The output
// lattice has the input cell width, even extents (so 0 is a vertex and no
// cell is singular), and is grown until the support plus one zero layer fits.
GridFunction symmetrize(const GridFunction& u, const NormSpec& spec);

// Discrete integrals. `mass` sums squared values in sorted order, so any two
// grids with the same multiset of values give bit-identical results. `hardy`
// skips the cell whose open interior contains 0. `dirichlet` uses forward
// differences with zero extension and applies F_* to each difference covector.
double discrete_mass(const GridFunction& u);
double discrete_hardy(const GridFunction& u, const Norm& norm);
double discrete_dirichlet(const GridFunction& u, const Norm& norm);

struct RearrangeReport {
  double mass_in = 0, mass_out = 0;
  double hardy_in = 0, hardy_out = 0;
  double dirichlet_in = 0, dirichlet_out = 0;
  double slack = 0;  // eps_h used by the Polya-Szego check
  bool cavalieri = false;
  bool hardy_littlewood = false;
  bool polya_szego = false;
};

RearrangeReport cavalieri_check(const GridFunction& u, const NormSpec& spec);
RearrangeReport hardy_littlewood_check(const GridFunction& u, const NormSpec& spec);
RearrangeReport polya_szego_check(const GridFunction& u, const NormSpec& spec, double slack_constant = kSlackConstant);
// All three checks against a single symmetrization.
RearrangeReport rearrange_report(const GridFunction& u, const NormSpec& spec, double slack_constant = kSlackConstant);

// Ratio dirichlet/hardy for n >= 3 and boundary-vanishing u.
double hardy_inequality_check(const GridFunction& u, const NormSpec& spec);

}  // namespace bpv
