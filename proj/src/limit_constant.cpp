#include "fraclt/limit_constant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fraclt/errors.hpp"
#include "fraclt/quadrature.hpp"

namespace fraclt {
namespace {

constexpr int kMaxBlocks = 64;
constexpr double kBlockRatio = 1e-4;

double halton(std::size_t index, std::size_t base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

double integrate_block(const std::function<double(double)>& g, double lo, double hi) {
  return integrate_adaptive(g, lo, hi, {}, 1e-10).value +
         integrate_adaptive(g, -hi, -lo, {}, 1e-10).value;
}

// Smallest dyadic radius beyond which h1 carries a negligible share.
double truncation_radius(const std::function<double(double)>& h1) {
  double total = integrate_adaptive(h1, -1.0, 1.0, {}, 1e-12).value;
  double radius = 1.0;
  for (int k = 0; k < kMaxBlocks; ++k) {
    const double block = integrate_block(h1, radius, 2.0 * radius);
    total += block;
    radius *= 2.0;
    if (k >= 2 && block <= 1e-15 * total) break;
  }
  return radius;
}

}  // namespace

AdmissibilityReport check_condition_A_gamma(const BivariateF& f, double gamma) {
  if (!(gamma >= 0.0)) throw DomainError("check_condition_A_gamma: gamma must be >= 0");
  if (!f.h1 || !f.h2 || !f.eval) throw ConfigError("functional '" + f.name + "' lacks h1/h2/eval");

  AdmissibilityReport rep;
  rep.gamma = gamma;
  const auto weighted = [&](double y) { return std::pow(std::abs(y), gamma) * f.h1(y); };

  const double origin[] = {0.0};
  double total = integrate_adaptive(weighted, -1.0, 1.0, origin, 1e-10).value;
  double radius = 1.0;
  for (int k = 0; k < kMaxBlocks; ++k) {
    const double block = integrate_block(weighted, radius, 2.0 * radius);
    total += block;
    radius *= 2.0;
    rep.blocks = k + 1;
    if (!std::isfinite(total)) break;
    rep.last_block_ratio = total > 0.0 ? block / total : 0.0;
    if (k >= 2 && rep.last_block_ratio < kBlockRatio) {
      rep.integral_converged = true;
      break;
    }
  }
  rep.integral = total;

  constexpr std::size_t kPoints = 10000;
  rep.domination_points = kPoints;
  for (std::size_t i = 1; i <= kPoints; ++i) {
    const double y = -50.0 + 100.0 * halton(i, 2);
    const double z = -50.0 + 100.0 * halton(i, 3);
    const double bound = f.h1(y) * f.h2(z);
    if (std::abs(f.eval(y, z)) > bound * (1.0 + 1e-12) + 1e-300) ++rep.domination_violations;
  }
  rep.domination_holds = rep.domination_violations == 0;
  rep.admissible = rep.integral_converged && rep.domination_holds;

  std::ostringstream msg;
  if (rep.admissible) {
    msg << "admissible for gamma=" << gamma << " (integral ~ " << rep.integral << ")";
  } else {
    msg << "inadmissible for gamma=" << gamma << ":";
    if (!rep.integral_converged)
      msg << " integral of |y|^gamma h1 does not converge (last block ratio "
          << rep.last_block_ratio << " after " << rep.blocks << " blocks)";
    if (!rep.domination_holds)
      msg << " domination |f| <= h1 h2 fails at " << rep.domination_violations << " of "
          << kPoints << " grid points";
  }
  rep.message = msg.str();
  return rep;
}

LimitConstant limit_constant(const BivariateF& f, double sigma, const QuadratureConfig& config) {
  if (!(sigma > 0.0)) throw DomainError("limit_constant: sigma must be positive");
  if (config.hermite_degree < 2) throw DomainError("limit_constant: hermite_degree must be >= 2");
  const AdmissibilityReport adm = check_condition_A_gamma(f, 2.0);
  if (!adm.admissible) throw ConfigError("functional '" + f.name + "': " + adm.message);

  LimitConstant out;
  out.truncation = truncation_radius(f.h1);
  const double radius = out.truncation;

  const auto inner = [&](double z) {
    std::vector<double> cuts{0.0};
    if (f.breakpoints) {
      const auto extra = f.breakpoints(z);
      cuts.insert(cuts.end(), extra.begin(), extra.end());
    }
    return integrate_adaptive([&](double y) { return f.eval(y, z); }, -radius, radius, cuts,
                              config.inner_rel_tol)
        .value;
  };

  const auto outer = [&](int degree) {
    if (config.split_at_zero) {
      const GaussRule rule = half_range_hermite(degree);
      return rule.apply([&](double x) { return inner(sigma * x) + inner(-sigma * x); });
    }
    const GaussRule rule = gauss_hermite(degree);
    return rule.apply([&](double x) { return inner(sigma * x); });
  };

  out.value = outer(config.hermite_degree);
  out.coarse_value = outer(std::max(2, config.hermite_degree / 2));
  const double gap = std::abs(out.value - out.coarse_value);
  if (gap > config.refinement_tol * std::max(std::abs(out.value), 1e-12)) {
    std::ostringstream diag;
    diag << "degree " << config.hermite_degree << ": " << out.value << ", degree "
         << config.hermite_degree / 2 << ": " << out.coarse_value << ", truncation " << radius;
    throw NumericalError("limit_constant: quadrature did not converge for '" + f.name + "'",
                         diag.str());
  }
  if (f.closed_form) {
    out.closed_form = f.closed_form(sigma);
    out.closed_form_gap = std::abs(out.value - *out.closed_form);
  }
  return out;
}

}  // namespace fraclt
