#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "fraclt/errors.hpp"
#include "fraclt/fbm.hpp"
#include "fraclt/functionals.hpp"
#include "fraclt/limit_constant.hpp"
#include "fraclt/local_time.hpp"
#include "fraclt/rng.hpp"
#include "fraclt/stats.hpp"
#include "fraclt/vstat.hpp"

using namespace fraclt;

namespace {

const double kSqrt2OverPi = std::sqrt(2.0 / std::numbers::pi);

// X_{i/n} = i/n + offset on [0, T], [nT] + 2 points.
FbmPath line_path(std::uint64_t n, double offset, double horizon = 1.0) {
  std::vector<double> v(static_cast<std::size_t>(n * horizon) + 2);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i) / n + offset;
  return FbmPath::injected(std::move(v), n, horizon, HurstParameter(0.5));
}

}  // namespace

TEST(Functionals, PointValues) {
  EXPECT_EQ(f1_eval(1, -2), 1.0);
  EXPECT_EQ(f2_eval(1, -2), 2.0);
  EXPECT_EQ(f1_eval(1, 1), 0.0);
  EXPECT_EQ(f2_eval(1, 1), 0.0);
  EXPECT_EQ(f1_eval(0, 5), 0.0);
  EXPECT_EQ(f2_eval(0, 5), 0.0);
  EXPECT_EQ(f1_eval(2, -2), 0.0);  // lands exactly on the level
}

TEST(Functionals, SignsOnAGrid) {
  for (double y = -3; y <= 3; y += 0.25)
    for (double z = -5; z <= 5; z += 0.25) {
      const double a = f1_eval(y, z), b = f2_eval(y, z);
      EXPECT_TRUE(a == 0.0 || a == 1.0);
      EXPECT_GE(b, 0.0);
    }
}

TEST(Functionals, Registry) {
  EXPECT_EQ(functional_by_name("f1").name, "f1");
  EXPECT_EQ(kernel_by_name("gauss").name, "gauss");
  EXPECT_THROW(functional_by_name("f3"), ConfigError);
  EXPECT_THROW(kernel_by_name("nope"), ConfigError);
  EXPECT_NEAR(kernel_by_name("indicator").integral, 1.0, 1e-10);
  EXPECT_NEAR(kernel_by_name("gauss").l1_norm, 1.0, 1e-10);
}

TEST(Functionals, KernelNormMismatchRejected) {
  const auto g = [](double y) { return std::exp(-y * y); };
  EXPECT_NO_THROW(make_kernel("g", g, std::sqrt(std::numbers::pi)));
  EXPECT_THROW(make_kernel("g", g, 2.0), ConfigError);
}

TEST(ConditionA, CrossingFunctionalIsAdmissible) {
  BivariateF f = make_f1();
  f.h1 = [](double y) { return std::min(1.0, std::pow(std::fabs(y), -5.0)); };
  f.h2 = [](double z) { return std::max(1.0, std::pow(std::fabs(z), 5.0)); };
  const auto r = check_condition_A_gamma(f, 2.0);
  EXPECT_TRUE(r.admissible) << r.message;
  EXPECT_TRUE(r.domination_holds);
  EXPECT_GE(r.domination_points, 10000u);
  // integral of |y|^2 min(1, |y|^-5) = 2 (1/3 + 1/2)
  EXPECT_NEAR(r.integral, 5.0 / 3.0, 1e-3);
  EXPECT_TRUE(check_condition_A_gamma(make_f2(), 2.0).admissible);
}

TEST(ConditionA, SlowTailIsInadmissible) {
  BivariateF f = make_f1();
  f.h1 = [](double y) { return 1.0 / (1.0 + std::fabs(y)); };
  const auto r = check_condition_A_gamma(f, 2.0);
  EXPECT_FALSE(r.admissible);
  EXPECT_FALSE(r.integral_converged);
}

TEST(ConditionA, GaussianSecondMoment) {
  BivariateF f = make_zero_functional();
  f.h1 = [](double y) { return std::exp(-0.5 * y * y) / std::sqrt(2 * std::numbers::pi); };
  f.h2 = [](double) { return 1.0; };
  const auto r = check_condition_A_gamma(f, 2.0);
  EXPECT_TRUE(r.admissible);
  EXPECT_NEAR(r.integral, 1.0, 1e-6);
}

TEST(ConditionA, DominationViolationDetected) {
  BivariateF f = make_f1();
  f.h1 = [](double y) { return std::min(1.0, std::pow(std::fabs(y), -5.0)); };
  f.h2 = [](double) { return 1e-3; };
  const auto r = check_condition_A_gamma(f, 2.0);
  EXPECT_FALSE(r.domination_holds);
  EXPECT_FALSE(r.admissible);
}

TEST(LimitConstant, ClosedForms) {
  for (double sigma : {0.5, 1.0, 2.0}) {
    const auto c1 = limit_constant(make_f1(), sigma);
    const auto c2 = limit_constant(make_f2(), sigma);
    EXPECT_NEAR(c1.value, sigma * kSqrt2OverPi, 1e-6);
    EXPECT_NEAR(c2.value, (2.0 / 3.0) * std::pow(sigma, 3) * kSqrt2OverPi, 1e-6);
    ASSERT_TRUE(c1.closed_form.has_value());
    EXPECT_LT(*c1.closed_form_gap, 1e-6);
  }
  EXPECT_NEAR(limit_constant(make_f1(), 1.0).value, 0.797885, 1e-6);
  EXPECT_NEAR(limit_constant(make_f2(), 1.0).value, 0.531923, 1e-6);
  EXPECT_EQ(limit_constant(make_zero_functional(), 1.0).value, 0.0);
}

TEST(LimitConstant, GenericFunctionalWithoutClosedForm) {
  // f(y,z) = 1{|y| <= 1} z^2: the inner integral is 2 z^2, so the constant is 2 sigma^2.
  BivariateF f;
  f.name = "box-z2";
  f.eval = [](double y, double z) { return std::fabs(y) <= 1.0 ? z * z : 0.0; };
  f.h1 = [](double y) { return std::fabs(y) <= 1.0 ? 1.0 : 0.0; };
  f.h2 = [](double z) { return std::max(1.0, z * z); };
  f.breakpoints = [](double) { return std::vector<double>{-1.0, 1.0}; };
  const auto c = limit_constant(f, 1.5);
  EXPECT_FALSE(c.closed_form.has_value());
  EXPECT_NEAR(c.value, 2.0 * 2.25, 1e-8);
}

TEST(LimitConstant, InadmissibleFunctionalRejected) {
  BivariateF f = make_f1();
  f.h1 = [](double y) { return 1.0 / (1.0 + std::fabs(y)); };
  EXPECT_THROW(limit_constant(f, 1.0), ConfigError);
}

TEST(LimitConstant, RefinementFailureIsNumericalError) {
  // A plain Hermite rule of degree 4 across the kink at z = 0 cannot agree
  // with its degree-2 sibling to 1e-4.
  QuadratureConfig q;
  q.hermite_degree = 4;
  q.split_at_zero = false;
  EXPECT_THROW(limit_constant(make_f2(), 1.0, q), NumericalError);
}

TEST(LocalTimeOracle, UnitSlopeLine) {
  const auto p = line_path(10000, -0.5);
  OracleOptions o;
  o.epsilon = 0.01;
  const auto e = occupation_local_time_oracle(p, 0.0, 1.0, o);
  EXPECT_NEAR(e.value, 1.0, 0.02);
  EXPECT_EQ(e.bandwidth, 0.01);
  EXPECT_GE(e.value, 0.0);
}

TEST(LocalTimeOracle, LevelNeverVisited) {
  const auto p = line_path(1000, 0.0);
  const auto e = occupation_local_time_oracle(p, 5.0, 1.0);
  EXPECT_EQ(e.value, 0.0);
}

TEST(LocalTimeOracle, TimeBeyondHorizonRejected) {
  const auto p = line_path(100, 0.0);
  EXPECT_THROW(occupation_local_time_oracle(p, 0.0, 1.5), DomainError);
  EXPECT_THROW(occupation_local_time_oracle(p, 0.0, -0.1), DomainError);
}

TEST(LocalTimeOracle, DefaultBandwidthAndRefinement) {
  const auto p = simulate_fbm(1024, HurstParameter(0.3), 1.0, 1.0, 5);
  OracleOptions o;
  o.refinement = 4;
  const auto e = occupation_local_time_oracle(p, 0.0, 1.0, o);
  EXPECT_EQ(e.refinement, 4096u);
  EXPECT_NEAR(e.bandwidth, 4.0 * std::pow(4096.0, -0.3), 1e-15);
  EXPECT_EQ(default_bandwidth(4096, HurstParameter(0.3)), e.bandwidth);
  EXPECT_GE(e.stability_delta, 0.0);
  EXPECT_EQ(e.flagged, e.stability_delta > 0.15);
}

TEST(LocalTimeOracle, MonotoneInTime) {
  const auto p = simulate_fbm(4096, HurstParameter(0.3), 1.0, 1.0, 8);
  std::vector<double> times;
  for (int k = 0; k <= 32; ++k) times.push_back(k / 32.0);
  const auto curve = occupation_local_time_curve(p, 0.0, times);
  for (std::size_t k = 1; k < curve.size(); ++k) EXPECT_LE(curve[k - 1], curve[k]);
  for (std::size_t k = 0; k < times.size(); k += 8)
    EXPECT_EQ(curve[k], occupation_local_time_oracle(p, 0.0, times[k]).value);
}

TEST(LocalTimeOracle, BrownianMeanAtZero) {
  // E L_1(0) = E|B_1| = sqrt(2/pi) for standard Brownian motion.
  const std::uint64_t reps = 2000;
  const FbmSampler sampler(16384, HurstParameter(0.5), 1.0, 1.0);
  OracleOptions o;
  o.refinement = 4;
  std::vector<double> l;
  for (std::uint64_t r = 0; r < reps; ++r)
    l.push_back(occupation_local_time_oracle(sampler.sample(derive_seed(31, r)), 0.0, 1.0, o).value);
  const auto s = stats::summarize(l);
  EXPECT_NEAR(s.mean, kSqrt2OverPi, 3.0 * s.se_mean);
}

TEST(LocalTimeOracle, OccupationTimesFormula) {
  const std::uint64_t m = 1 << 18;
  const auto phi = [](double x) {
    const double u = x / 2.0;
    return std::fabs(u) < 1.0 ? (1 - u * u) * (1 - u * u) : 0.0;
  };
  for (std::uint64_t seed : {3, 4}) {
    const auto p = simulate_fbm(m, HurstParameter(0.5), 1.0, 1.0, seed);
    double lhs = 0.0;
    for (std::uint64_t i = 0; i < m; ++i) lhs += phi(p.values[i]);
    lhs /= static_cast<double>(m);
    const double dx = 0.01;
    double rhs = 0.0;
    for (double x = -2.0 + dx; x < 2.0 - dx / 2; x += dx)
      rhs += phi(x) * occupation_local_time_oracle(p, x, 1.0).value * dx;
    EXPECT_NEAR(rhs, lhs, 0.05 * lhs) << "seed " << seed;
  }
}

TEST(VStatistic, LineCrossedAtUnitSpeed) {
  const auto p = line_path(10000, -0.5);
  const auto s = v_statistic_univariate(p, kernel_by_name("indicator"), 0.5, 0.0);
  EXPECT_NEAR(s.at(1.0), 1.0, 0.05);
  EXPECT_TRUE(s.warnings.empty());
}

TEST(VStatistic, ZeroPathAwayFromLevel) {
  std::vector<double> v(102, 0.0);
  const auto p = FbmPath::injected(v, 100, 1.0, HurstParameter(0.5));
  const auto s = v_statistic_univariate(p, kernel_by_name("indicator"), 0.5, 1.0);
  for (const double x : s.values) EXPECT_EQ(x, 0.0);
}

TEST(VStatistic, UnivariateSkipsIndexZero) {
  // Only X_0 sits at the level; Eq. (Vg) starts at i = 1.
  std::vector<double> v(102, 10.0);
  v[0] = 0.0;
  const auto p = FbmPath::injected(v, 100, 1.0, HurstParameter(0.5));
  const auto s = v_statistic_univariate(p, kernel_by_name("indicator"), 0.5, 0.0);
  EXPECT_EQ(s.at(1.0), 0.0);
}

TEST(VStatistic, BivariateIncludesIndexZero) {
  // Only the step from X_0 to X_{1/n} crosses the level.
  std::vector<double> v(102);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.1 * static_cast<double>(i);
  v[0] = -0.05;
  const auto p = FbmPath::injected(v, 100, 1.0, HurstParameter(0.5));
  const auto s = v_statistic_bivariate(p, make_f1(), 0.5, 0.0);
  EXPECT_DOUBLE_EQ(s.at(0.0), std::sqrt(100.0) / 100.0);
  EXPECT_DOUBLE_EQ(s.at(1.0), std::sqrt(100.0) / 100.0);
}

TEST(VStatistic, AlternatingPathCrossesEveryStep) {
  const std::uint64_t n = 1000;
  const double h = 0.3, un = std::pow(double(n), h);
  std::vector<double> v(n + 2);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (i % 2 == 0 ? 1.0 : -1.0) / un;
  const auto p = FbmPath::injected(v, n, 1.0, HurstParameter(h));
  const auto s = v_statistic_bivariate(p, make_f1(), h, 0.0);
  EXPECT_NEAR(s.at(1.0), un * (n + 1.0) / n, 1e-12 * un);
  EXPECT_EQ(count_sign_changes(p, 0.0, 1.0), n + 1);
}

TEST(VStatistic, NoSignChangeGivesZeroF2) {
  const auto p = line_path(500, 0.25);
  const auto s = v_statistic_bivariate(p, make_f2(), 0.5, 0.0);
  for (const double x : s.values) EXPECT_EQ(x, 0.0);
}

TEST(VStatistic, CrossingCountIdentityExact) {
  for (double h : {0.3, 0.5, 0.8}) {
    const auto p = simulate_fbm(4096, HurstParameter(h), 1.0, 1.0, 12);
    const auto s = v_statistic_bivariate(p, make_f1(), h, 0.0);
    for (std::size_t i = 0; i <= p.last_index(); i += 97)
      EXPECT_EQ(s.raw[i], static_cast<double>(count_sign_changes(p, 0.0, p.time(i))));
    EXPECT_EQ(s.raw[p.last_index()], static_cast<double>(count_sign_changes(p, 0.0, 1.0)));
    EXPECT_EQ(s.scale, std::pow(4096.0, h) / 4096.0);
  }
}

TEST(VStatistic, ScaleInvarianceOfCrossings) {
  const auto p = simulate_fbm(2048, HurstParameter(0.3), 1.0, 1.0, 13);
  const auto base = v_statistic_bivariate(p, make_f1(), 0.3, 0.0);
  for (double c : {0.01, 3.0, 1e4}) {
    auto q = p;
    for (auto& x : q.values) x *= c;
    EXPECT_EQ(v_statistic_bivariate(q, make_f1(), 0.3, 0.0).values, base.values);
  }
}

TEST(VStatistic, NonNegativeStatisticsAreMonotone) {
  const auto p = simulate_fbm(4096, HurstParameter(0.4), 1.0, 1.0, 14);
  for (const auto& s : {v_statistic_bivariate(p, make_f1(), 0.4, 0.1),
                        v_statistic_bivariate(p, make_f2(), 0.4, 0.0),
                        v_statistic_univariate(p, kernel_by_name("gauss"), 0.4, 0.0)}) {
    for (std::size_t i = 1; i < s.values.size(); ++i) EXPECT_LE(s.values[i - 1], s.values[i]);
  }
}

TEST(VStatistic, ExponentOutsideUnitIntervalWarns) {
  const auto p = line_path(100, -0.5);
  EXPECT_FALSE(v_statistic_univariate(p, kernel_by_name("gauss"), 1.2, 0.0).warnings.empty());
  EXPECT_FALSE(v_statistic_bivariate(p, make_f1(), 0.0, 0.0).warnings.empty());
}

TEST(VStatistic, GaussKernelTracksLocalTimeOnBrownianPaths) {
  const std::uint64_t n = 1 << 16;
  const FbmSampler sampler(n, HurstParameter(0.5), 1.0, 1.0);
  std::vector<double> rel;
  for (std::uint64_t r = 0; r < 60; ++r) {
    const auto p = sampler.sample(derive_seed(41, r));
    const double v = v_statistic_univariate(p, kernel_by_name("gauss"), 0.5, 0.0).at(1.0);
    const double l = occupation_local_time_oracle(p, 0.0, 1.0).value;
    if (l > 0.0) rel.push_back(std::fabs(v - l) / l);
  }
  EXPECT_LT(stats::median(rel), 0.10);
}

TEST(VStatistic, CsvRoundTrip) {
  const auto p = simulate_fbm(256, HurstParameter(0.3), 1.0, 1.0, 15);
  const auto s = v_statistic_bivariate(p, make_f1(), 0.3, 0.0);
  const auto file = std::filesystem::temp_directory_path() / "fraclt_vstat_roundtrip.csv";
  write_statistic_csv(s, file.string());
  const auto back = read_statistic_csv(file.string());
  EXPECT_EQ(back.times, s.times);
  EXPECT_EQ(back.values, s.values);
  std::filesystem::remove(file);
}
