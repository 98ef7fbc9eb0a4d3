#include "fraclt/local_time.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fraclt/errors.hpp"

namespace fraclt {
namespace {

void validate(const FbmPath& path, double t, const OracleOptions& options, double epsilon) {
  if (!(t >= 0.0) || t > path.horizon * (1.0 + 1e-12))
    throw DomainError("local time oracle: t must lie in [0, horizon]");
  if (options.refinement == 0) throw DomainError("local time oracle: refinement must be >= 1");
  if (!(epsilon > 0.0)) throw DomainError("local time oracle: bandwidth must be positive");
}

// Counts j in [0, end) with |X_{j/m} - x| <= eps on the interpolated grid
// m = r * n, reporting the running count at each checkpoint index.
void count_hits(const FbmPath& path, double x, double eps, std::uint64_t r,
                std::span<const std::uint64_t> checkpoints, std::span<std::uint64_t> counts) {
  const auto& v = path.values;
  std::uint64_t hits = 0;
  std::uint64_t j = 0;
  const double inv_r = 1.0 / static_cast<double>(r);
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    const std::uint64_t end = checkpoints[c];
    for (; j < end; ++j) {
      const std::uint64_t i = j / r;
      const std::uint64_t k = j % r;
      const double value = k == 0 ? v[i] : v[i] + (static_cast<double>(k) * inv_r) * (v[i + 1] - v[i]);
      if (std::abs(value - x) <= eps) ++hits;
    }
    counts[c] = hits;
  }
}

double estimate(const FbmPath& path, double x, double t, double eps, std::uint64_t r) {
  const std::uint64_t m = path.n * r;
  const std::uint64_t end[] = {grid_index(m, t)};
  std::uint64_t hits[1] = {0};
  count_hits(path, x, eps, r, end, hits);
  return static_cast<double>(hits[0]) / (static_cast<double>(m) * 2.0 * eps);
}

}  // namespace

double default_bandwidth(std::uint64_t m, HurstParameter h) {
  return 4.0 * std::pow(static_cast<double>(m), -h.value());
}

LocalTimeEstimate occupation_local_time_oracle(const FbmPath& path, double x, double t,
                                               const OracleOptions& options) {
  const std::uint64_t m = path.n * std::max<std::uint64_t>(options.refinement, 1);
  const double eps = options.epsilon.value_or(default_bandwidth(m, path.hurst));
  validate(path, t, options, eps);

  LocalTimeEstimate out;
  out.level = x;
  out.time = t;
  out.bandwidth = eps;
  out.refinement = m;
  out.value = estimate(path, x, t, eps, options.refinement);
  const double finer = estimate(path, x, t, 0.5 * eps, 2 * options.refinement);
  if (out.value > 0.0)
    out.stability_delta = std::abs(finer - out.value) / out.value;
  else
    out.stability_delta = finer > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  out.flagged = out.stability_delta > options.stability_threshold;
  return out;
}

std::vector<double> occupation_local_time_curve(const FbmPath& path, double x,
                                                std::span<const double> times,
                                                const OracleOptions& options) {
  const std::uint64_t m = path.n * std::max<std::uint64_t>(options.refinement, 1);
  const double eps = options.epsilon.value_or(default_bandwidth(m, path.hurst));
  std::vector<std::uint64_t> ends(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    validate(path, times[i], options, eps);
    ends[i] = grid_index(m, times[i]);
    if (i > 0 && ends[i] < ends[i - 1])
      throw DomainError("occupation_local_time_curve: times must be ascending");
  }
  std::vector<std::uint64_t> hits(times.size());
  count_hits(path, x, eps, options.refinement, ends, hits);
  std::vector<double> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    out[i] = static_cast<double>(hits[i]) / (static_cast<double>(m) * 2.0 * eps);
  return out;
}

}  // namespace fraclt
