#include "fraclt/covariance.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>

#include <cmath>
#include <mutex>
#include <string>
#include <vector>

#include "fraclt/errors.hpp"

namespace fraclt {
namespace {

constexpr std::uint64_t kSeriesLagThreshold = 8;
constexpr std::uint64_t kDirectSumLags = 1024;

// Generalized binomial coefficient C(a, m).
double binomial(double a, int m) {
  double c = 1.0;
  for (int i = 0; i < m; ++i) c *= (a - i) / (i + 1);
  return c;
}

void disable_gsl_abort() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

double hurwitz_zeta(double s, double q) {
  disable_gsl_abort();
  gsl_sf_result r;
  const int status = gsl_sf_hzeta_e(s, q, &r);
  if (status != GSL_SUCCESS)
    throw NumericalError("Hurwitz zeta evaluation failed",
                         "s=" + std::to_string(s) + " q=" + std::to_string(q) +
                             " status=" + gsl_strerror(status));
  return r.val;
}

}  // namespace

double fbm_covariance(double s, double t, HurstParameter h) {
  if (!(s >= 0.0) || !(t >= 0.0))
    throw DomainError("fbm_covariance: times must be non-negative");
  const double a = h.two_h();
  return 0.5 * (std::pow(t, a) + std::pow(s, a) - std::pow(std::abs(t - s), a));
}

double increment_autocovariance(std::uint64_t k, HurstParameter h) {
  const double a = h.two_h();
  if (k == 0) return 1.0;
  const double kd = static_cast<double>(k);
  if (k < kSeriesLagThreshold)
    return 0.5 * (std::pow(kd + 1.0, a) + std::pow(kd - 1.0, a) - 2.0 * std::pow(kd, a));

  // sum_{j>=1} C(a,2j) k^{a-2j}; terms shrink by ~k^{-2} per step.
  const double inv_k2 = 1.0 / (kd * kd);
  double power = std::pow(kd, a) * inv_k2;
  double coeff = binomial(a, 2);
  double sum = 0.0;
  for (int j = 1; j < 64; ++j) {
    const double term = coeff * power;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    // C(a, 2j+2) from C(a, 2j)
    coeff *= (a - 2 * j) * (a - 2 * j - 1) / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
    power *= inv_k2;
  }
  return sum;
}

double rho_level_increment(std::uint64_t i, HurstParameter h) {
  if (i == 0) throw DomainError("rho_level_increment: index must be >= 1");
  const double a = h.two_h();
  const double id = static_cast<double>(i);
  // (i+1)^a - i^a = i^a * expm1(a * log1p(1/i))
  const double diff = std::pow(id, a) * std::expm1(a * std::log1p(1.0 / id));
  return (diff - 1.0) / (2.0 * std::pow(id, h.value()));
}

double asymptotic_variance_v2(double sigma, HurstParameter h, double tol) {
  if (h.value() >= 0.75)
    throw DomainError("asymptotic_variance_v2: variance diverges in Rosenblatt regime (H >= 3/4)");
  if (!(tol > 0.0)) throw DomainError("asymptotic_variance_v2: tol must be positive");
  if (!(sigma > 0.0)) throw DomainError("asymptotic_variance_v2: sigma must be positive");

  const double a = h.two_h();
  double head = 0.0;
  for (std::uint64_t k = 1; k <= kDirectSumLags; ++k) {
    const double g = increment_autocovariance(k, h);
    head += g * g;
  }

  // rho_k^2 = sum_{s>=2} d_s k^{2a-2s}, d_s = sum_{j+l=s} C(a,2j) C(a,2l).
  std::vector<double> c(1, 0.0);
  const double q = static_cast<double>(kDirectSumLags + 1);
  // Budget for the series in sum rho^2 so that the v^2 error stays below tol.
  const double series_tol = tol / (4.0 * std::pow(sigma, 4));
  double tail = 0.0;
  for (int s = 2; s < 200; ++s) {
    c.push_back(binomial(a, 2 * (s - 1)));
    double d = 0.0;
    for (int j = 1; j < s; ++j) d += c[j] * c[s - j];
    const double exponent = 2.0 * s - 2.0 * a;
    tail += d * hurwitz_zeta(exponent, q);
    // |d_{s'}| <= s', zeta(x, q) <= 2 q^{1-x}; the remaining terms decay
    // geometrically with ratio q^{-2}.
    const double next = s + 1.0;
    const double bound =
        2.0 * next * std::pow(q, 1.0 - (2.0 * next - 2.0 * a)) / (1.0 - 1.0 / (q * q));
    if (bound < series_tol) break;
  }
  const double sum_sq = head + tail;
  return 2.0 * std::pow(sigma, 4) * (1.0 + 2.0 * sum_sq);
}

}  // namespace fraclt
