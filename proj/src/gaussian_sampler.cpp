#include "fraclt/gaussian_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft.hpp"
#include "fraclt/errors.hpp"
#include "fraclt/rng.hpp"

namespace fraclt {

StationaryGaussianSampler::StationaryGaussianSampler(std::vector<double> acov,
                                                     SamplerOptions options)
    : acov_(std::move(acov)), method_(options.method) {
  if (acov_.empty()) throw DomainError("StationaryGaussianSampler: empty autocovariance");
  const std::vector<double>& seq = acov_;
  init([&seq](std::size_t k) { return k < seq.size() ? seq[k] : 0.0; }, std::max<std::size_t>(seq.size() - 1, 1),
       options);
}

StationaryGaussianSampler::StationaryGaussianSampler(const AutocovarianceFn& acov,
                                                     std::size_t n, SamplerOptions options)
    : method_(options.method) {
  if (n == 0) throw DomainError("StationaryGaussianSampler: empty autocovariance");
  acov_.resize(n);
  for (std::size_t k = 0; k < n; ++k) acov_[k] = acov(k);
  init(acov, detail::fft_friendly_size(std::max<std::size_t>(n - 1, 1)), options);
}

void StationaryGaussianSampler::init(const AutocovarianceFn& acov, std::size_t m,
                                     const SamplerOptions& options) {
  if (!(acov_[0] > 0.0)) throw DomainError("StationaryGaussianSampler: variance must be positive");
  if (method_ == Generator::CirculantEmbedding && try_circulant(acov, m, options)) return;
  if (method_ == Generator::CirculantEmbedding) {
    std::ostringstream msg;
    msg << "circulant embedding indefinite (min eigenvalue ratio " << min_eigen_ratio_
        << "); falling back to dense factorization";
    warnings_.push_back(msg.str());
  }
  method_ = Generator::DenseFactorization;
  build_dense(options);
}

bool StationaryGaussianSampler::try_circulant(const AutocovarianceFn& acov, std::size_t m,
                                              const SamplerOptions& options) {
  const std::size_t len = 2 * m;

  // First row of the circulant: c_0..c_m, c_{m-1}..c_1.
  detail::FftBuffer row(len);
  for (std::size_t j = 0; j <= m; ++j) {
    const double c = acov(j);
    row[j] = c;
    if (j > 0 && j < m) row[len - j] = c;
  }
  detail::forward_fft_inplace(row);

  double max_eig = 0.0;
  for (std::size_t k = 0; k < len; ++k) max_eig = std::max(max_eig, row[k].real());
  if (!(max_eig > 0.0)) {
    min_eigen_ratio_ = -1.0;
    return false;
  }
  double min_eig = 0.0;
  for (std::size_t k = 0; k < len; ++k) min_eig = std::min(min_eig, row[k].real());
  min_eigen_ratio_ = min_eig / max_eig;
  if (min_eig < -options.negative_eigen_tolerance * max_eig) return false;

  sqrt_eigen_.resize(len);
  for (std::size_t k = 0; k < len; ++k) {
    double lambda = row[k].real();
    if (lambda < 0.0) {
      lambda = 0.0;
      ++clipped_;
    }
    sqrt_eigen_[k] = std::sqrt(lambda / static_cast<double>(len));
  }
  if (clipped_ > 0) {
    std::ostringstream msg;
    msg << "clipped " << clipped_ << " slightly negative embedding eigenvalue(s) to zero (min ratio "
        << min_eigen_ratio_ << ")";
    warnings_.push_back(msg.str());
  }
  return true;
}

void StationaryGaussianSampler::build_dense(const SamplerOptions& options) {
  const std::size_t n = acov_.size();
  if (n > options.dense_cap) {
    std::ostringstream msg;
    msg << "dense factorization of a " << n << "x" << n << " covariance exceeds the cap of "
        << options.dense_cap;
    throw ResourceError(msg.str());
  }
  Eigen::MatrixXd cov(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cov(i, j) = acov_[i > j ? i - j : j - i];
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw NumericalError("dense factorization failed: covariance is not positive definite");
  dense_factor_ = llt.matrixL();
}

void StationaryGaussianSampler::sample(std::uint64_t seed, std::span<double> out) const {
  if (out.size() != acov_.size())
    throw DomainError("StationaryGaussianSampler::sample: output length mismatch");
  NormalStream normal(seed);

  if (method_ == Generator::DenseFactorization) {
    const auto n = static_cast<Eigen::Index>(acov_.size());
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = normal();
    Eigen::VectorXd y = dense_factor_.triangularView<Eigen::Lower>() * z;
    std::copy(y.data(), y.data() + n, out.begin());
    return;
  }

  const std::size_t len = sqrt_eigen_.size();
  detail::FftBuffer w(len);
  for (std::size_t k = 0; k < len; ++k) {
    const double re = normal();
    const double im = normal();
    w[k] = std::complex<double>(sqrt_eigen_[k] * re, sqrt_eigen_[k] * im);
  }
  detail::forward_fft_inplace(w);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = w[j].real();
}

}  // namespace fraclt
