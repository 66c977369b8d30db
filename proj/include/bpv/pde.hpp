#pragma once

#include <cstdint>
#include <string>

#include "bpv/radial.hpp"

namespace bpv {

// Radial form of -Delta u - c u/rho^2 + lambda u = u^{p-1} on the unit ball,
// c = (n-2)^2/4 - alpha^2.
struct PdeProblem {
  double alpha = 0.0;
  int n = 2;
  double p = 4.0;
  double lambda = 0.0;
};

// Admissible (alpha, n) and 2 < p < 2n/(n-2) (any p > 2 for n = 2).
void validate(const PdeProblem& prob);

// Max abs residual of the equation by three-point differences on the mesh,
// skipping the two nodes nearest 0. With nonlinear = false the u^{p-1} term
// is dropped.
double radial_residual(const PdeProblem& prob, const RadialProfile& h, bool nonlinear = true);

// n omega_n [ 1/2 int (h'^2 - c h^2/rho^2 + lambda h^2) rho^{n-1} - 1/p int h_+^p rho^{n-1} ]
double energy(const PdeProblem& prob, const RadialProfile& h);

// min(1, 1 + lambda/j^2), times 4 alpha^2/(n-2)^2 when n >= 3.
double coercivity_constant(const PdeProblem& prob, double lF);

// Negative entries set to 0.
RadialProfile nonnegativity_projection(const RadialProfile& h);

struct PdeSolution {
  RadialProfile profile;
  double energy = 0.0;
  double residual = 0.0;  // radial_residual of profile
  bool nonzero = false;
  bool inconclusive = false;
  int attempts = 0;
  int converged_attempts = 0;
  int collapsed_attempts = 0;
  std::string status;
};

// Nehari descent from `attempts` seeded starts, Newton on the finite element
// equations, then damped Newton on the difference equations that
// radial_residual measures. mesh.grading = 0 selects a uniform mesh.
// Nonexistence is only reported when every start collapses.
PdeSolution solve(const PdeProblem& prob, const MeshSpec& mesh, int attempts, std::uint64_t seed = 0);

struct NecessityIdentity {
  double lhs = 0.0;  // (lambda + j^2) int u* u
  double rhs = 0.0;  // int u* u^{p-1}
  double relative_error = 0.0;
};
// u* is the first Dirichlet eigenfunction rho^{(2-n)/2} J_alpha(j rho).
NecessityIdentity necessity_identity(const PdeProblem& prob, const RadialProfile& u);

}  // namespace bpv
