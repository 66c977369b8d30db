#pragma once

#include <vector>

namespace bpv {

// Radial function sampled at 0 < rho[0] < ... < rho[M-1] = R.
struct RadialProfile {
  double R = 1.0;
  double grading = 1.0;
  std::vector<double> rho;
  std::vector<double> h;
};

struct MeshSpec {
  int M = 2000;
  double grading = 0.0;  // 0 selects default_grading(alpha, n)
};

// rho_i = R (i/M)^gamma, i = 1..M.
std::vector<double> graded_mesh(double R, int M, double gamma);

// 1 in the regular case alpha = (n-2)/2, 2 otherwise.
double default_grading(double alpha, int n);

// Hardy coefficient (n-2)^2/4 - alpha^2.
double hardy_coefficient(double alpha, int n);

// Symmetric tridiagonal matrix; off[i] couples unknowns i and i+1.
struct Tridiag {
  std::vector<double> diag;
  std::vector<double> off;

  double quad(const std::vector<double>& x) const;
  void apply(const std::vector<double>& x, std::vector<double>& y) const;
  // Solves (this) y = b by LDL' without pivoting; throws if a pivot is <= 0.
  std::vector<double> solve_spd(const std::vector<double>& b) const;
};

// P1 elements on [rho_i, rho_{i+1}] and the power-law element (rho/rho_1)^s,
// s = alpha - (n-2)/2, on (0, rho_1]. Unknowns are the values at rho_1..rho_{M-1};
// the value at R is pinned to 0. All integrals are exact.
struct RadialForms {
  int n = 2;
  double alpha = 0.0;
  double c = 0.0;  // hardy_coefficient
  double s = 0.0;  // exponent of the first element
  std::vector<double> rho;
  Tridiag stiff;   // int h'^2 rho^{n-1}
  Tridiag hardy;   // int h^2 rho^{n-3}
  Tridiag mass;    // int h^2 rho^{n-1}
  Tridiag energy;  // stiff - c*hardy
};

RadialForms assemble_radial(double alpha, int n, const std::vector<double>& rho);

// Admissible (alpha, n) pairs: n = 2 with alpha = 0, or n >= 3 with 0 < alpha <= (n-2)/2.
void require_admissible(double alpha, int n);

}  // namespace bpv
