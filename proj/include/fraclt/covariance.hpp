#pragma once

#include <cstdint>

#include "fraclt/hurst.hpp"

namespace fraclt {

/// E[B_s B_t] = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2 for a standard fBm.
/// Throws DomainError for negative times.
double fbm_covariance(double s, double t, HurstParameter h);

/// Autocovariance of standardized increments at integer lag k:
///   gamma(k) = ((k+1)^{2H} + |k-1|^{2H} - 2 k^{2H}) / 2.
///
/// This is cov(n^H D_i X, n^H D_j X) for |j-i| = k with sigma = 1, and it
/// also equals rho_k = cov(B_1, B_{k+1} - B_k): by stationarity of the
/// increments, cov(B_1 - B_0, B_{k+1} - B_k) is the lag-k autocovariance of
/// unit-step increments, so both quantities are served by this function.
///
/// Large lags use the binomial expansion sum_j C(2H, 2j) k^{2H-2j} to avoid
/// the cancellation of the direct second difference.
double increment_autocovariance(std::uint64_t k, HurstParameter h);

/// corr(X_{i/n}, D_i X) = ((i+1)^{2H} - i^{2H} - 1) / (2 i^H), i >= 1.
/// Independent of n by self-similarity. i = 0 throws DomainError.
double rho_level_increment(std::uint64_t i, HurstParameter h);

/// v^2 = 2 sigma^4 (1 + 2 sum_{k>=1} rho_k^2), defined for H < 3/4.
///
/// The series is summed exactly up to a fixed lag and the remainder is
/// expanded as sum_s d_s zeta(2s - 4H, K+1) (Hurwitz zeta); the expansion
/// is truncated once its analytic remainder bound drops below `tol`.
/// Throws DomainError for H >= 3/4 (the series diverges) or tol <= 0.
double asymptotic_variance_v2(double sigma, HurstParameter h, double tol = 1e-12);

}  // namespace fraclt
