#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace bpv {

enum class NormFamily { Lp, Quadratic, Mix };

// F(x) = kappa * family(x). For Mix, family(x) = w_lp*|x|_p + w_quad*sqrt(x'Ax).
struct NormSpec {
  int n = 2;
  NormFamily family = NormFamily::Quadratic;
  double p = 2.0;
  std::vector<double> matrix;  // row-major n x n, empty means identity
  std::array<double, 2> weights{0.5, 0.5};
  double kappa = 1.0;
};

NormSpec euclidean_norm(int n);
NormSpec lp_norm(int n, double p, double kappa = 1.0);
NormSpec quadratic_norm(int n, std::vector<double> matrix, double kappa = 1.0);
NormSpec mix_norm(int n, double p, std::vector<double> matrix, double w_lp, double kappa = 1.0);

// Throws InvalidArgument describing the first violated constraint.
void validate(const NormSpec& spec);

NormSpec norm_from_json(const std::string& text);
std::string norm_to_json(const NormSpec& spec);
NormSpec read_norm_file(const std::string& path);

// Prepared norm: factorizations are computed once.
class Norm {
 public:
  explicit Norm(const NormSpec& spec);

  const NormSpec& spec() const { return spec_; }
  int dim() const { return spec_.n; }

  double eval(const double* x) const;
  double polar(const double* xi) const;
  // Gradient of F at x != 0.
  void gradient(const double* x, double* g) const;
  // Hessian of F^2/2 at v != 0 by central differences of F*grad F, row-major.
  void half_square_hessian(const double* v, double* hess) const;

  struct PolarCertificate {
    double lower = 0.0;
    double upper = 0.0;
    int iterations = 0;
  };
  // Mix family: bracket of F_*(xi) from a Legendre-transform Newton solve.
  PolarCertificate polar_certified(const double* xi) const;

 private:
  double lp(const double* x) const;
  double lq(const double* x) const;
  double quad(const double* x) const;
  double quad_dual(const double* xi) const;
  void lp_grad(const double* x, double* g) const;
  void quad_grad(const double* x, double* g) const;

  NormSpec spec_;
  double q_ = 2.0;
  std::vector<double> chol_;  // lower factor L with A = L L'
  std::vector<double> amat_;
};

double norm_eval(const NormSpec& spec, std::span<const double> x);
double polar_eval(const NormSpec& spec, std::span<const double> xi);

struct VolumeEstimate {
  double value = 0.0;
  double error = 0.0;  // quadrature or QMC error estimate
  std::string method;
};
VolumeEstimate unit_ball_volume(const NormSpec& spec);

// Rescales kappa so that the unit ball has volume omega(n).
NormSpec normalize(const NormSpec& spec);

// Sampled upper bound for the uniformity constant. Nested deterministic
// direction sets make the estimate non-increasing in the budget.
double uniformity_constant(const NormSpec& spec, int sample_budget);

// Deterministic unit directions (w.r.t. the Euclidean norm): golden-angle
// sequence for n = 2, Halton points accepted inside the unit ball otherwise.
std::vector<double> sample_directions(int n, int count);

}  // namespace bpv
