#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fraclt/fbm.hpp"

namespace fraclt {

struct LocalTimeEstimate {
  double level = 0.0;
  double time = 0.0;
  double value = 0.0;
  double bandwidth = 0.0;
  std::uint64_t refinement = 0;  // grid frequency m of the Riemann sum
  double stability_delta = 0.0;  // relative change under (2m, eps/2)
  bool flagged = false;          // stability_delta above the threshold
};

struct OracleOptions {
  // Bandwidth; default 4 m^{-H} with m the refined grid frequency.
  std::optional<double> epsilon;
  // m = refinement * n; intermediate points are linearly interpolated.
  std::uint64_t refinement = 1;
  double stability_threshold = 0.15;
};

/// Default oracle bandwidth 4 m^{-H}.
double default_bandwidth(std::uint64_t m, HurstParameter h);

/// Occupation-density estimate of L_t(x):
///   (1 / 2 eps) * (1/m) * #{ j < [mt] : |X_{j/m} - x| <= eps },
/// i.e. the Riemann sum of the occupation measure of [x-eps, x+eps] divided by
/// its length. Throws DomainError if t exceeds the path horizon.
LocalTimeEstimate occupation_local_time_oracle(const FbmPath& path, double x, double t,
                                               const OracleOptions& options = {});

/// The same estimator evaluated at several times (ascending) in one pass,
/// without the stability re-run.
std::vector<double> occupation_local_time_curve(const FbmPath& path, double x,
                                                std::span<const double> times,
                                                const OracleOptions& options = {});

}  // namespace fraclt
