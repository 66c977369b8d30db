#pragma once

#include "bpv/grid.hpp"
#include "bpv/norm.hpp"
#include "bpv/radial.hpp"

namespace bpv {

// j_alpha^2 (omega_n / volume)^{2/n}. Accepts 0 <= alpha <= (n-2)/2, or alpha = 0 for n = 2.
double sharp_constant(double alpha, int n, double volume);

// h(rho) = rho^{(2-n)/2} J_alpha(sqrt(S) rho), S = j_alpha^2 / R^2.
RadialProfile extremal_profile(double alpha, int n, double R, const MeshSpec& mesh);

// Limit of h(rho) rho^{(n-2)/2 - alpha} at 0 for the extremal above.
double extremal_origin_constant(double alpha, int n, double R);

// Max over nodes 3..M-1 (1-based) of the flux-form residual of
// (h' rho^{n-1})' + (c rho^{n-3} + Q rho^{n-1}) h.
double euler_lagrange_residual(const RadialProfile& profile, double alpha, int n, double Q);

// Energy over mass with the finite element forms of assemble_radial.
double radial_rayleigh_quotient(const RadialProfile& profile, double alpha, int n);

struct EigenResult {
  double mu = 0.0;
  RadialProfile minimizer;  // nonnegative, max 1, h(R) = 0
  int iterations = 0;
};
EigenResult radial_eigen_min(double alpha, int n, double R, const MeshSpec& mesh);

struct BpvReport {
  double lhs = 0.0;            // int F_*(Du)^2
  double hardy_term = 0.0;     // c int u^2/F^2
  double poincare_term = 0.0;  // S int u^2
  double margin = 0.0;
  double sharp_constant = 0.0;
  double slack = 0.0;          // eps_h = C*h
  double scale = 0.0;          // lhs; PASS iff margin >= -slack*scale
  bool pass = false;
  bool below_admissible_range = false;
  double uniformity = 1.0;     // l_F estimate
  double alpha_lower = 0.0;    // (n-2)/2 sqrt(1 - l_F^2)
  double alpha_upper = 0.0;
};

BpvReport verify_bpv_grid(const GridFunction& u, const NormSpec& spec, double alpha, double domain_volume,
                          double slack_constant = 10.0);

}  // namespace bpv
