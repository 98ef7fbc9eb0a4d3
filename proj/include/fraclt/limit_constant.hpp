#pragma once

#include <optional>
#include <string>

#include "fraclt/functionals.hpp"

namespace fraclt {

struct AdmissibilityReport {
  bool admissible = false;
  double gamma = 0.0;
  // Estimate of the integral of |y|^gamma h1(y) and the last tail block ratio.
  double integral = 0.0;
  double last_block_ratio = 0.0;
  int blocks = 0;
  bool integral_converged = false;
  // Sampled domination |f| <= h1 h2 on a Halton grid over [-50, 50]^2.
  bool domination_holds = false;
  std::size_t domination_points = 0;
  std::size_t domination_violations = 0;
  std::string message;
};

/// Numerical check of the integrability/domination condition on f for a
/// given gamma: integrates |y|^gamma h1(y) over [-1,1] and then dyadic blocks
/// 2^k <= |y| < 2^{k+1}, declaring convergence once a block contributes less
/// than 1e-4 of the running total. Divergence is reported, not thrown.
AdmissibilityReport check_condition_A_gamma(const BivariateF& f, double gamma);

struct QuadratureConfig {
  int hermite_degree = 64;
  // Use half-range Hermite rules on z < 0 and z > 0 separately. The inner
  // y-integral of f1/f2 is |z| resp. |z|^3/3, which is not smooth at z = 0.
  bool split_at_zero = true;
  double inner_rel_tol = 1e-12;
  // Successive refinements (degree/2 vs degree) must agree to this.
  double refinement_tol = 1e-4;
};

struct LimitConstant {
  double value = 0.0;
  double coarse_value = 0.0;  // same rule at half the degree
  double truncation = 0.0;    // |y| <= truncation for the inner integral
  std::optional<double> closed_form;
  std::optional<double> closed_form_gap;
};

/// c(f, sigma) = integral of f(y,z) phi_{sigma^2}(z) dy dz, the factor in
/// V(f)_t -> c(f, sigma) L_t(x). Throws ConfigError if f is not admissible for
/// gamma = 2 and NumericalError if the refinement check fails.
LimitConstant limit_constant(const BivariateF& f, double sigma, const QuadratureConfig& config = {});

}  // namespace fraclt
