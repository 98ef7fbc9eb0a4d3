#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fraclt/fbm.hpp"
#include "fraclt/functionals.hpp"

namespace fraclt {

struct StatisticConfig {
  std::string functional;
  double un_exponent = 0.0;  // u_n = n^{un_exponent}
  double level = 0.0;
  std::uint64_t n = 0;
  double hurst = 0.0;
  double sigma = 0.0;
};

/// Piecewise-constant partial-sum process evaluated on the grid t_i = i/n.
/// values[i] = scale * raw[i]; raw keeps the unscaled partial sums so exact
/// integer-valued identities (crossing counts) can be checked without the
/// round trip through the scale factor.
struct StatisticPath {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> raw;
  double scale = 1.0;
  StatisticConfig config;
  std::vector<std::string> warnings;

  double at(double t) const;
};

/// V(g)_t = (u_n/n) sum_{i=1}^{[nt]} g(u_n (X_{i/n} - x)).
StatisticPath v_statistic_univariate(const FbmPath& path, const KernelG& g, double un_exponent,
                                     double x);

/// V(f)_t = (u_n/n) sum_{i=0}^{[nt]} f(u_n (X_{i/n} - x), u_n D_i X).
StatisticPath v_statistic_bivariate(const FbmPath& path, const BivariateF& f, double un_exponent,
                                    double x);

/// Number of i <= [nt] with (X_{i/n} - x)(X_{(i+1)/n} - x) < 0.
std::uint64_t count_sign_changes(const FbmPath& path, double x, double t);

/// CSV with header `t,value`.
void write_statistic_csv(const StatisticPath& s, std::ostream& out);
void write_statistic_csv(const StatisticPath& s, const std::string& file);
StatisticPath read_statistic_csv(const std::string& file);

}  // namespace fraclt
