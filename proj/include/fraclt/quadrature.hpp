#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fraclt {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  double apply(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// Golub-Welsch: nodes and weights from the Jacobi matrix of a three-term
/// recurrence p_{k+1} = (x - alpha_k) p_k - beta_k p_{k-1}, with total mass mu0.
GaussRule golub_welsch(std::span<const double> alpha, std::span<const double> beta, double mu0);

/// Gauss-Legendre on [-1, 1].
GaussRule gauss_legendre(int degree);

/// Gauss-Hermite for the standard normal density: sum w_i g(x_i) ~ E[g(N(0,1))].
GaussRule gauss_hermite(int degree);

/// Gauss rule for the half-line weight phi(x) 1{x > 0} (total mass 1/2).
/// Recurrence coefficients come from a discretized Stieltjes procedure on a
/// composite Gauss-Legendre grid over [0, 14]; phi is below 1e-42 beyond.
GaussRule half_range_hermite(int degree);

struct IntegrationResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (7-15) on [a, b], split at every breakpoint
/// inside (a, b). Infinite endpoints are allowed.
IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     std::span<const double> breakpoints = {},
                                     double rel_tol = 1e-12, unsigned max_depth = 30);

}  // namespace fraclt
