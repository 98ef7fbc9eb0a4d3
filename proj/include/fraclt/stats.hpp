#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fraclt::stats {

double mean(std::span<const double> x);
/// Unbiased sample variance.
double variance(std::span<const double> x);

/// Type-7 quantile of an ascending sample.
double quantile_sorted(std::span<const double> sorted, double p);
double median(std::span<const double> x);

struct Interval {
  double low = 0.0;
  double high = 0.0;
  bool contains(double v) const { return low <= v && v <= high; }
};

/// Two-sided standard normal critical value for the given confidence level.
double normal_critical(double confidence);

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double se_mean = 0.0;
  double variance = 0.0;
  Interval variance_ci;  // normal approximation using the sample kurtosis
  // Adjusted Fisher-Pearson G1 and sample excess kurtosis G2, with their
  // standard errors under normality and the resulting z-scores.
  double skewness = 0.0;
  double skewness_se = 0.0;
  double skewness_z = 0.0;
  double excess_kurtosis = 0.0;
  double kurtosis_se = 0.0;
  double kurtosis_z = 0.0;
  double median = 0.0;
  Interval median_ci;  // distribution-free order-statistic interval
  double q25 = 0.0;
  double q75 = 0.0;
  double iqr = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Needs at least 4 values; intervals are at 95%.
Summary summarize(std::span<const double> x);

struct Correlation {
  double r = 0.0;
  Interval ci;  // Fisher z interval, 95%
};
Correlation pearson(std::span<const double> x, std::span<const double> y);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;  // from residuals; 0 with two points
  double r2 = 0.0;
};
LinearFit ols(std::span<const double> x, std::span<const double> y);

/// Weighted least squares with known per-point standard errors of y; the
/// slope error is propagated from those, not from the residuals.
LinearFit wls(std::span<const double> x, std::span<const double> y, std::span<const double> y_se);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};
/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

}  // namespace fraclt::stats
