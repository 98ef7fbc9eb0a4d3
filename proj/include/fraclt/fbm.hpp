#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fraclt/gaussian_sampler.hpp"
#include "fraclt/hurst.hpp"

namespace fraclt {

enum class PathOrigin { CirculantEmbedding, DenseFactorization, Injected, Imported };

std::string_view origin_name(PathOrigin o);

/// [n t] for grid frequency n. The small slack absorbs t = i/n round-off.
std::uint64_t grid_index(std::uint64_t n, double t);

/// A sample of X = sigma * B^H on the grid i/n, i = 0..[nT]+1. The extra
/// final point makes the increment D_{[nT]} X available.
struct FbmPath {
  HurstParameter hurst{0.5};
  double sigma = 1.0;
  std::uint64_t n = 1;
  double horizon = 1.0;
  std::uint64_t seed = 0;
  PathOrigin origin = PathOrigin::Injected;
  std::vector<double> values;
  std::vector<std::string> warnings;

  /// [nT]: index of the last statistic term.
  std::size_t last_index() const noexcept { return values.size() - 2; }
  double time(std::size_t i) const noexcept { return static_cast<double>(i) / static_cast<double>(n); }

  /// Wraps caller-supplied values (deterministic test paths and the like).
  /// Requires values.size() == [nT] + 2; X_0 = 0 is not required.
  static FbmPath injected(std::vector<double> values, std::uint64_t n, double horizon,
                          HurstParameter hurst, double sigma = 1.0);
};

/// Reusable exact sampler for fixed (n, H, sigma, horizon). The embedding
/// eigenvalues are computed once; `sample` is const and thread-safe.
class FbmSampler {
 public:
  FbmSampler(std::uint64_t n, HurstParameter hurst, double sigma, double horizon,
             SamplerOptions options = {});

  FbmPath sample(std::uint64_t seed) const;
  /// Writes the path values (length points()) without allocating a path.
  void sample_into(std::uint64_t seed, std::vector<double>& values) const;

  std::size_t points() const noexcept { return increments_.size() + 1; }
  Generator method() const noexcept { return increments_.method(); }
  const StationaryGaussianSampler& increment_sampler() const noexcept { return increments_; }

 private:
  std::uint64_t n_;
  HurstParameter hurst_;
  double sigma_;
  double horizon_;
  StationaryGaussianSampler increments_;
  double scale_;
};

/// One exact fBm path; see FbmSampler.
FbmPath simulate_fbm(std::uint64_t n, HurstParameter hurst, double sigma, double horizon,
                     std::uint64_t seed, SamplerOptions options = {});

/// Coarse observation X_{i/(n/factor)} of a fine path, on [0, horizon].
/// Throws DomainError if factor does not divide n or the fine path is too short.
FbmPath subsample(const FbmPath& fine, std::uint64_t factor, double horizon);

/// CSV with header `t,x`, one row per grid point, 17 significant digits.
void write_path_csv(const FbmPath& path, std::ostream& out);
void write_path_csv(const FbmPath& path, const std::string& file);

/// Reads the `t,x` schema back. n is recovered from the time column, the
/// horizon as ([rows] - 2) / n; H and sigma are not part of the schema.
FbmPath read_path_csv(std::istream& in, HurstParameter hurst, double sigma);
FbmPath read_path_csv(const std::string& file, HurstParameter hurst, double sigma);

}  // namespace fraclt
