#include "fraclt/quadvar.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fraclt/errors.hpp"
#include "fraclt/functionals.hpp"
#include "fraclt/summation.hpp"

namespace fraclt {
namespace {

PathMeta meta_of(const FbmPath& p) {
  return {p.hurst.value(), p.sigma, p.n, p.horizon, p.seed, p.origin};
}

template <class Transform>
QuadVarStatistic centered_sum(const FbmPath& path, double sigma, Transform tr) {
  if (path.values.size() < 2) throw DomainError("quadratic variation: path needs two points");
  const double nh = std::pow(static_cast<double>(path.n), path.hurst.value());
  const double s2 = sigma * sigma;
  const std::size_t last = path.last_index();
  std::vector<double> terms(last + 1);
  for (std::size_t i = 0; i <= last; ++i) {
    const double d = nh * (tr(path.values[i + 1]) - tr(path.values[i]));
    terms[i] = d * d - s2;
  }
  QuadVarStatistic out;
  out.values = prefix_sums(terms);
  out.times.resize(out.values.size());
  for (std::size_t i = 0; i < out.times.size(); ++i) out.times[i] = path.time(i);
  out.sigma_assumed = sigma;
  out.path_meta = meta_of(path);
  if (sigma != path.sigma) {
    std::ostringstream w;
    w << "centering sigma " << sigma << " differs from the path sigma " << path.sigma;
    out.warnings.push_back(w.str());
  }
  return out;
}

}  // namespace

RegimeLimit regime_limit(HurstParameter h) { return regime_limit(h.regime(), h); }

RegimeLimit regime_limit(Regime regime, HurstParameter h) {
  RegimeLimit r;
  r.regime = regime;
  r.hurst = h.value();
  switch (regime) {
    case Regime::LT:
      r.scaling_exponent = h.value() - 1.0;
      r.local_time_coefficient = -2.0 / 3.0;
      r.limit_descriptor = "-(2/3) E|N|^3 L_t(0), a deterministic multiple of local time";
      r.checkable_signatures = {"ratio to oracle local time", "IQR shrinking in n"};
      break;
    case Regime::Boundary:
      r.scaling_exponent = -0.5;
      r.local_time_coefficient = -2.0 / 3.0;
      r.limit_descriptor = "v W_t - (2/3) E|N|^3 L_t(0), W independent of L";
      r.checkable_signatures = {"residual variance v^2", "residual normality",
                                "residual uncorrelated with local time"};
      break;
    case Regime::CLT:
      r.scaling_exponent = -0.5;
      r.limit_descriptor = "v W_t, W a standard Brownian motion";
      r.checkable_signatures = {"variance v^2", "skewness and excess kurtosis near 0",
                                "variance linear in t"};
      break;
    case Regime::Rosenblatt:
      r.scaling_exponent = 1.0 - 2.0 * h.value();
      r.limit_descriptor = "sigma^2 R_t, R a Rosenblatt process";
      r.checkable_signatures = {"log-variance slope 4H-2", "positive excess kurtosis"};
      break;
  }
  return r;
}

double QuadVarStatistic::at(double t) const {
  const std::uint64_t i = grid_index(path_meta.n, t);
  if (t < 0.0 || i >= values.size()) throw DomainError("QuadVarStatistic::at: t outside the grid");
  return values[i];
}

QuadVarStatistic centered_quadvar_abs(const FbmPath& path, double sigma) {
  return centered_sum(path, sigma, [](double v) { return std::abs(v); });
}

QuadVarStatistic centered_quadvar(const FbmPath& path, double sigma) {
  return centered_sum(path, sigma, [](double v) { return v; });
}

DecompositionResidual crossing_decomposition_check(const FbmPath& path, double sigma) {
  DecompositionResidual res;
  const auto& v = path.values;
  if (v.size() < 2) throw DomainError("crossing_decomposition_check: path needs two points");
  const std::size_t last = path.last_index();
  for (std::size_t i = 0; i <= last + 1; ++i) res.scale = std::max(res.scale, std::abs(v[i]));
  for (std::size_t i = 0; i <= last; ++i) {
    const double a = std::abs(v[i + 1]) - std::abs(v[i]);
    const double b = v[i + 1] - v[i];
    const double p = v[i] * v[i + 1];
    const double rhs = p < 0.0 ? -4.0 * std::abs(p) : 0.0;
    res.pointwise = std::max(res.pointwise, std::abs(a * a - b * b - rhs));
  }
  const double scale2 = std::max(res.scale * res.scale, 1e-300);
  if (res.pointwise > 1e-9 * scale2) {
    std::ostringstream d;
    d << "pointwise residual " << res.pointwise << ", scale^2 " << scale2;
    throw AlgebraViolation("crossing identity violated", d.str());
  }

  const double n = static_cast<double>(path.n);
  const double h = path.hurst.value();
  const auto s_abs = centered_quadvar_abs(path, sigma);
  const auto s_x = centered_quadvar(path, sigma);
  const auto v_f2 = v_statistic_bivariate(path, make_f2(), h, 0.0);
  const double nh = std::pow(n, -h);
  // Magnitude of the summed terms, to normalise the rounding tolerance.
  double magnitude = 0.0;
  const double n2h = std::pow(n, 2.0 * h);
  for (std::size_t i = 0; i <= last; ++i) {
    const double b = v[i + 1] - v[i];
    magnitude += n2h * b * b + sigma * sigma + std::abs(v[i] * v[i + 1]) * n2h * 2.0;
  }
  magnitude /= n;
  for (std::size_t i = 0; i < s_abs.values.size(); ++i) {
    const double lhs = s_abs.values[i] / n;
    const double rhs = s_x.values[i] / n - 2.0 * nh * v_f2.values[i];
    res.aggregate = std::max(res.aggregate, std::abs(lhs - rhs));
  }
  if (res.aggregate > 1e-9 * std::max(magnitude, 1e-300)) {
    std::ostringstream d;
    d << "aggregate residual " << res.aggregate << ", term magnitude " << magnitude;
    throw AlgebraViolation("quadratic variation decomposition violated", d.str());
  }
  return res;
}

StatisticPath scaled_statistic(const QuadVarStatistic& stat, const RegimeLimit& regime) {
  StatisticPath out;
  const double n = static_cast<double>(stat.path_meta.n);
  out.scale = std::pow(n, regime.scaling_exponent);
  out.times = stat.times;
  out.raw = stat.values;
  out.values.resize(stat.values.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = out.scale * stat.values[i];
  out.config = {"quadvar-abs/" + std::string(regime_name(regime.regime)), regime.scaling_exponent,
                0.0, stat.path_meta.n, stat.path_meta.hurst, stat.path_meta.sigma};
  out.warnings = stat.warnings;
  std::string mismatch;
  try {
    if (HurstParameter(stat.path_meta.hurst).regime() != regime.regime)
      mismatch = "path H=" + std::to_string(stat.path_meta.hurst) + " is not in regime " +
                 std::string(regime_name(regime.regime));
  } catch (const UnsupportedRegimeError&) {
    mismatch = "path H=0.75 has no supported regime";
  }
  if (!mismatch.empty()) out.warnings.push_back(mismatch);
  return out;
}

double estimate_sigma_squared(const FbmPath& path) {
  const std::size_t count = path.last_index();
  if (count == 0) throw DomainError("estimate_sigma_squared: need at least one increment");
  std::vector<double> sq(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double d = path.values[i + 1] - path.values[i];
    sq[i] = d * d;
  }
  const double n2h = std::pow(static_cast<double>(path.n), 2.0 * path.hurst.value());
  return n2h * pairwise_sum(sq) / static_cast<double>(count);
}

}  // namespace fraclt
