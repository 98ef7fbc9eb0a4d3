#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fraclt {

/// Univariate kernel g in L^1 for V(g).
struct KernelG {
  std::string name;
  std::function<double(double)> eval;
  double l1_norm = 0.0;   // integral of |g|
  double integral = 0.0;  // integral of g (the constant multiplying L_t(x))
  std::vector<double> breakpoints;
};

/// Builds a kernel, integrating g and |g| numerically. When `l1_norm` is
/// supplied it must agree with the numerical value to 1%, else ConfigError.
KernelG make_kernel(std::string name, std::function<double(double)> eval,
                    std::optional<double> l1_norm = std::nullopt,
                    std::vector<double> breakpoints = {});

/// Test functional f(y, z) for V(f), with a dominating pair
/// |f(y,z)| <= h1(y) h2(z).
struct BivariateF {
  std::string name;
  std::function<double(double, double)> eval;
  std::function<double(double)> h1;
  std::function<double(double)> h2;
  double gamma = 2.0;
  // Points in y where f(., z) is not smooth; helps the inner quadrature.
  std::function<std::vector<double>(double)> breakpoints;
  // Closed form of the integral of f(y,z) phi_{sigma^2}(z) dy dz, if known.
  std::function<double(double)> closed_form;
};

/// f1(y,z) = 1{y(y+z) < 0}: the step from y to y+z crosses zero.
inline double f1_eval(double y, double z) noexcept { return y * (y + z) < 0.0 ? 1.0 : 0.0; }

/// f2(y,z) = -2y(y+z) 1{y(y+z) < 0}; non-negative.
inline double f2_eval(double y, double z) noexcept {
  const double p = y * (y + z);
  return p < 0.0 ? -2.0 * p : 0.0;
}

BivariateF make_f1();
BivariateF make_f2();
BivariateF make_zero_functional();

/// Registry. Kernels: "indicator" (g = 1{|y|<=1}/2), "gauss" (standard normal
/// density). Functionals: "f1", "f2", "zero". Unknown names throw ConfigError.
KernelG kernel_by_name(const std::string& name);
BivariateF functional_by_name(const std::string& name);
std::vector<std::string> kernel_names();
std::vector<std::string> functional_names();

}  // namespace fraclt
