#include "fraclt/functionals.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fraclt/errors.hpp"
#include "fraclt/quadrature.hpp"

namespace fraclt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const double kSqrt2OverPi = std::sqrt(2.0 / std::numbers::pi);

double power_cap(double v, double p) {
  const double a = std::abs(v);
  return a <= 1.0 ? 1.0 : std::pow(a, p);
}

// Where f1/f2 switch on or off in y for fixed z: y = 0 and y = -z.
std::vector<double> crossing_breakpoints(double z) { return {0.0, -z}; }

}  // namespace

KernelG make_kernel(std::string name, std::function<double(double)> eval,
                    std::optional<double> l1_norm, std::vector<double> breakpoints) {
  if (!eval) throw ConfigError("kernel '" + name + "': missing evaluation function");
  const auto abs_g = [&eval](double y) { return std::abs(eval(y)); };
  const double numeric_l1 = integrate_adaptive(abs_g, -kInf, kInf, breakpoints, 1e-10).value;
  if (!std::isfinite(numeric_l1) || !(numeric_l1 > 0.0))
    throw ConfigError("kernel '" + name + "': integral of |g| is not finite and positive");
  if (l1_norm && std::abs(*l1_norm - numeric_l1) > 0.01 * numeric_l1) {
    std::ostringstream msg;
    msg << "kernel '" << name << "': supplied L1 norm " << *l1_norm
        << " disagrees with numerical value " << numeric_l1;
    throw ConfigError(msg.str());
  }
  KernelG g;
  g.name = std::move(name);
  g.integral = integrate_adaptive(eval, -kInf, kInf, breakpoints, 1e-10).value;
  g.eval = std::move(eval);
  g.l1_norm = l1_norm.value_or(numeric_l1);
  g.breakpoints = std::move(breakpoints);
  return g;
}

BivariateF make_f1() {
  BivariateF f;
  f.name = "f1";
  f.eval = f1_eval;
  // f1 = 1 forces |y| < |z|, so 1 <= max(1,|z|^5) / max(1,|y|^5).
  f.h1 = [](double y) { return 1.0 / power_cap(y, 5.0); };
  f.h2 = [](double z) { return power_cap(z, 5.0); };
  f.gamma = 2.0;
  f.breakpoints = crossing_breakpoints;
  f.closed_form = [](double sigma) { return sigma * kSqrt2OverPi; };
  return f;
}

BivariateF make_f2() {
  BivariateF f;
  f.name = "f2";
  f.eval = f2_eval;
  // On the support |y| + |y+z| = |z|, so f2 <= 2|y||z|.
  f.h1 = [](double y) { return 4.0 * std::abs(y) / power_cap(y, 5.0); };
  f.h2 = [](double z) { return std::abs(z) * power_cap(z, 5.0); };
  f.gamma = 2.0;
  f.breakpoints = crossing_breakpoints;
  f.closed_form = [](double sigma) { return 2.0 / 3.0 * sigma * sigma * sigma * kSqrt2OverPi; };
  return f;
}

BivariateF make_zero_functional() {
  BivariateF f;
  f.name = "zero";
  f.eval = [](double, double) { return 0.0; };
  f.h1 = [](double y) { return std::exp(-y * y); };
  f.h2 = [](double) { return 1.0; };
  f.gamma = 2.0;
  f.closed_form = [](double) { return 0.0; };
  return f;
}

KernelG kernel_by_name(const std::string& name) {
  if (name == "indicator")
    return make_kernel(
        "indicator", [](double y) { return std::abs(y) <= 1.0 ? 0.5 : 0.0; }, 1.0, {-1.0, 1.0});
  if (name == "gauss")
    return make_kernel(
        "gauss",
        [](double y) { return 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2 * std::exp(-0.5 * y * y); },
        1.0);
  throw ConfigError("unknown kernel '" + name + "' (known: indicator, gauss)");
}

BivariateF functional_by_name(const std::string& name) {
  if (name == "f1") return make_f1();
  if (name == "f2") return make_f2();
  if (name == "zero") return make_zero_functional();
  throw ConfigError("unknown functional '" + name + "' (known: f1, f2, zero)");
}

std::vector<std::string> kernel_names() { return {"indicator", "gauss"}; }
std::vector<std::string> functional_names() { return {"f1", "f2", "zero"}; }

}  // namespace fraclt
