#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fraclt {

enum class Generator { CirculantEmbedding, DenseFactorization };

struct SamplerOptions {
  // Requested method. CirculantEmbedding falls back to dense factorization
  // when the embedding is indefinite beyond `negative_eigen_tolerance`.
  Generator method = Generator::CirculantEmbedding;
  // Embedding eigenvalues in [-tol * max, 0) are clipped to zero.
  double negative_eigen_tolerance = 1e-8;
  // Largest matrix dimension the dense factorization accepts.
  std::size_t dense_cap = 2048;
};

/// Exact sampler of a zero-mean stationary Gaussian sequence (Y_0..Y_{N-1})
/// with autocovariance cov(Y_i, Y_j) = acov[|i-j|].
///
/// Circulant embedding: acov is mirrored into a circulant of size 2m
/// (m >= N-1, rounded up to an FFT-friendly length), whose eigenvalues are
/// the DFT of its first row. With complex white noise W_k scaled by
/// sqrt(lambda_k / 2m), the real part of DFT(W) has exactly the target law.
class StationaryGaussianSampler {
 public:
  using AutocovarianceFn = std::function<double(std::size_t)>;

  /// Finite sequence: the embedding uses exactly m = N - 1.
  explicit StationaryGaussianSampler(std::vector<double> acov, SamplerOptions options = {});
  /// Autocovariance given as a function of the lag; the embedding length is
  /// rounded up to an FFT-friendly size and filled from `acov` beyond N - 1.
  StationaryGaussianSampler(const AutocovarianceFn& acov, std::size_t n,
                            SamplerOptions options = {});

  std::size_t size() const noexcept { return acov_.size(); }
  Generator method() const noexcept { return method_; }
  std::size_t embedding_size() const noexcept { return sqrt_eigen_.size(); }
  std::size_t clipped_eigenvalues() const noexcept { return clipped_; }
  // Most negative embedding eigenvalue relative to the largest (0 if none).
  double min_eigen_ratio() const noexcept { return min_eigen_ratio_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  /// Fills `out` (length size()) with one sample driven by `seed`.
  void sample(std::uint64_t seed, std::span<double> out) const;

 private:
  void init(const AutocovarianceFn& acov, std::size_t m, const SamplerOptions& options);
  bool try_circulant(const AutocovarianceFn& acov, std::size_t m, const SamplerOptions& options);
  void build_dense(const SamplerOptions& options);

  std::vector<double> acov_;
  Generator method_;
  std::vector<double> sqrt_eigen_;  // sqrt(lambda_k / 2m)
  Eigen::MatrixXd dense_factor_;
  std::size_t clipped_ = 0;
  double min_eigen_ratio_ = 0.0;
  std::vector<std::string> warnings_;
};

}  // namespace fraclt
