#include "fraclt/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "fraclt/errors.hpp"
#include "fraclt/summation.hpp"

namespace fraclt::stats {
namespace {

std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  return s;
}

// Central moment sums m_k = sum (x - mean)^k / N.
struct Moments {
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
};

Moments central_moments(std::span<const double> x, double mu) {
  std::vector<double> t2(x.size()), t3(x.size()), t4(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - mu;
    t2[i] = d * d;
    t3[i] = t2[i] * d;
    t4[i] = t2[i] * t2[i];
  }
  const double n = static_cast<double>(x.size());
  return {pairwise_sum(t2) / n, pairwise_sum(t3) / n, pairwise_sum(t4) / n};
}

}  // namespace

double mean(std::span<const double> x) {
  if (x.empty()) throw DomainError("mean of an empty sample");
  return pairwise_sum(x) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) throw DomainError("variance needs two values");
  const double n = static_cast<double>(x.size());
  return central_moments(x, mean(x)).m2 * n / (n - 1.0);
}

double quantile_sorted(std::span<const double> s, double p) {
  if (s.empty()) throw DomainError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile level outside [0,1]");
  const double h = (static_cast<double>(s.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

double median(std::span<const double> x) {
  const auto s = sorted_copy(x);
  return quantile_sorted(s, 0.5);
}

double normal_critical(double confidence) {
  return boost::math::quantile(boost::math::normal(), 0.5 + 0.5 * confidence);
}

Summary summarize(std::span<const double> x) {
  if (x.size() < 4) throw DomainError("summarize needs at least four values");
  Summary s;
  const double n = static_cast<double>(x.size());
  const double z95 = normal_critical(0.95);
  s.count = x.size();
  s.mean = mean(x);
  const Moments m = central_moments(x, s.mean);
  s.variance = m.m2 * n / (n - 1.0);
  s.se_mean = std::sqrt(s.variance / n);

  if (m.m2 > 0.0) {
    const double g1 = m.m3 / std::pow(m.m2, 1.5);
    const double g2 = m.m4 / (m.m2 * m.m2) - 3.0;
    s.skewness = std::sqrt(n * (n - 1.0)) / (n - 2.0) * g1;
    s.excess_kurtosis = (n - 1.0) / ((n - 2.0) * (n - 3.0)) * ((n + 1.0) * g2 + 6.0);
  }
  s.skewness_se = std::sqrt(6.0 * n * (n - 1.0) / ((n - 2.0) * (n + 1.0) * (n + 3.0)));
  s.kurtosis_se = 2.0 * s.skewness_se * std::sqrt((n * n - 1.0) / ((n - 3.0) * (n + 5.0)));
  s.skewness_z = s.skewness / s.skewness_se;
  s.kurtosis_z = s.excess_kurtosis / s.kurtosis_se;

  // Var(s^2) ~ sigma^4 (2/(n-1) + kappa/n), kappa the excess kurtosis.
  const double var_se =
      s.variance * std::sqrt(std::max(2.0 / (n - 1.0) + s.excess_kurtosis / n, 0.0));
  s.variance_ci = {std::max(0.0, s.variance - z95 * var_se), s.variance + z95 * var_se};

  const auto sorted = sorted_copy(x);
  s.min = sorted.front();
  s.max = sorted.back();
  s.median = quantile_sorted(sorted, 0.5);
  s.q25 = quantile_sorted(sorted, 0.25);
  s.q75 = quantile_sorted(sorted, 0.75);
  s.iqr = s.q75 - s.q25;
  // Ranks j < k with P(X_(j) <= median <= X_(k)) ~ 95% (binomial(n, 1/2)).
  const double half = 0.5 * z95 * std::sqrt(n);
  const auto lo = static_cast<long>(std::floor(0.5 * n - half));
  const auto hi = static_cast<long>(std::ceil(0.5 * n + half));
  const long last = static_cast<long>(sorted.size()) - 1;
  s.median_ci = {sorted[static_cast<std::size_t>(std::clamp(lo - 1, 0L, last))],
                 sorted[static_cast<std::size_t>(std::clamp(hi - 1, 0L, last))]};
  return s;
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 4) throw DomainError("pearson: need >= 4 paired values");
  const double mx = mean(x);
  const double my = mean(y);
  std::vector<double> sxy(x.size()), sxx(x.size()), syy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy[i] = (x[i] - mx) * (y[i] - my);
    sxx[i] = (x[i] - mx) * (x[i] - mx);
    syy[i] = (y[i] - my) * (y[i] - my);
  }
  const double denom = std::sqrt(pairwise_sum(sxx) * pairwise_sum(syy));
  Correlation c;
  c.r = denom > 0.0 ? pairwise_sum(sxy) / denom : 0.0;
  const double z = std::atanh(std::clamp(c.r, -0.999999999999, 0.999999999999));
  const double half = normal_critical(0.95) / std::sqrt(static_cast<double>(x.size()) - 3.0);
  c.ci = {std::tanh(z - half), std::tanh(z + half)};
  return c;
}

LinearFit ols(std::span<const double> x, std::span<const double> y) {
  const std::vector<double> ones(x.size(), 1.0);
  LinearFit fit = wls(x, y, ones);
  if (x.size() > 2) {
    const double mx = mean(x);
    double sxx = 0.0, rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxx += (x[i] - mx) * (x[i] - mx);
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_se = std::sqrt(rss / (static_cast<double>(x.size()) - 2.0) / sxx);
  } else {
    fit.slope_se = 0.0;
  }
  return fit;
}

LinearFit wls(std::span<const double> x, std::span<const double> y, std::span<const double> y_se) {
  if (x.size() != y.size() || x.size() != y_se.size() || x.size() < 2)
    throw DomainError("regression: need >= 2 paired values");
  double sw = 0.0, swx = 0.0, swy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / (y_se[i] * y_se[i]);
    sw += w;
    swx += w * x[i];
    swy += w * y[i];
  }
  const double mx = swx / sw;
  const double my = swy / sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / (y_se[i] * y_se[i]);
    sxx += w * (x[i] - mx) * (x[i] - mx);
    sxy += w * (x[i] - mx) * (y[i] - my);
    syy += w * (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("regression: x values must not all coincide");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.slope_se = 1.0 / std::sqrt(sxx);
  fit.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;  // series converges slowly; the value is 1 to 1e-10
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  const auto sa = sorted_copy(a);
  const auto sb = sorted_copy(b);
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == v) ++i;
    while (j < sb.size() && sb[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double en = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_survival((en + 0.12 + 0.11 / en) * d)};
}

}  // namespace fraclt::stats
