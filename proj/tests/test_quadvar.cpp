#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "fraclt/errors.hpp"
#include "fraclt/fbm.hpp"
#include "fraclt/functionals.hpp"
#include "fraclt/quadvar.hpp"
#include "fraclt/rng.hpp"
#include "fraclt/stats.hpp"
#include "fraclt/vstat.hpp"

using namespace fraclt;

TEST(RegimeLimit, ScalingExponents) {
  EXPECT_DOUBLE_EQ(regime_limit(HurstParameter(0.3)).scaling_exponent, 0.3 - 1.0);
  EXPECT_DOUBLE_EQ(regime_limit(HurstParameter(0.5)).scaling_exponent, -0.5);
  EXPECT_DOUBLE_EQ(regime_limit(HurstParameter(0.6)).scaling_exponent, -0.5);
  EXPECT_DOUBLE_EQ(regime_limit(HurstParameter(0.85)).scaling_exponent, 1.0 - 1.7);
  EXPECT_EQ(regime_limit(HurstParameter(0.3)).regime, Regime::LT);
  EXPECT_EQ(regime_limit(HurstParameter(0.85)).regime, Regime::Rosenblatt);
  EXPECT_THROW(regime_limit(HurstParameter(0.75)), UnsupportedRegimeError);
  EXPECT_FALSE(regime_limit(HurstParameter(0.6)).checkable_signatures.empty());
}

TEST(RegimeLimit, LocalTimeCoefficient) {
  EXPECT_DOUBLE_EQ(regime_limit(HurstParameter(0.3)).local_time_coefficient, -2.0 / 3.0);
  EXPECT_DOUBLE_EQ(regime_limit(HurstParameter(0.5)).local_time_coefficient, -2.0 / 3.0);
  EXPECT_EQ(regime_limit(HurstParameter(0.6)).local_time_coefficient, 0.0);
  EXPECT_EQ(regime_limit(HurstParameter(0.9)).local_time_coefficient, 0.0);
}

TEST(CenteredQuadvar, ConstantAbsoluteValue) {
  // |X| = 0.7 throughout, X switching sign: every |X| increment vanishes.
  const std::uint64_t n = 50;
  std::vector<double> v(n + 2);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (i % 3 == 0) ? 0.7 : -0.7;
  const auto p = FbmPath::injected(v, n, 1.0, HurstParameter(0.3), 1.5);
  const auto s = centered_quadvar_abs(p, 1.5);
  for (std::size_t i = 0; i < s.values.size(); ++i)
    EXPECT_DOUBLE_EQ(s.values[i], -(static_cast<double>(i) + 1.0) * 2.25);
}

TEST(CenteredQuadvar, NonNegativePathMatchesPlainVersion) {
  auto p = simulate_fbm(1024, HurstParameter(0.6), 1.0, 1.0, 3);
  for (auto& x : p.values) x = std::fabs(x) + 0.1;
  const auto a = centered_quadvar_abs(p, 1.0);
  const auto b = centered_quadvar(p, 1.0);
  EXPECT_EQ(a.values, b.values);
}

TEST(CenteredQuadvar, BrownianCenteringIsExact) {
  const std::uint64_t n = 4096;
  const FbmSampler sampler(n, HurstParameter(0.5), 1.0, 1.0);
  std::vector<double> m;
  for (std::uint64_t r = 0; r < 400; ++r)
    m.push_back(centered_quadvar(sampler.sample(derive_seed(6, r)), 1.0).at(1.0) / n);
  const auto s = stats::summarize(m);
  EXPECT_NEAR(s.mean, 0.0, 4.0 * s.se_mean);
}

TEST(CenteredQuadvar, SigmaMismatchFlagged) {
  const auto p = simulate_fbm(256, HurstParameter(0.3), 2.0, 1.0, 4);
  EXPECT_TRUE(centered_quadvar_abs(p, 2.0).warnings.empty());
  EXPECT_FALSE(centered_quadvar_abs(p, 1.0).warnings.empty());
}

TEST(CrossingDecomposition, DeterministicPaths) {
  std::vector<double> v{0.0, 1.0, -2.0, 3.0, 0.5, -0.25, -1.0, 2.0, 0.0, -3.0, 4.0, 1.0};
  const auto p = FbmPath::injected(v, 10, 1.0, HurstParameter(0.3));
  const auto r = crossing_decomposition_check(p, 1.0);
  EXPECT_LE(r.pointwise, 1e-14);
  EXPECT_LE(r.aggregate, 1e-12);
  EXPECT_EQ(r.scale, 4.0);
}

TEST(CrossingDecomposition, NoSignChangeMeansEqualIncrements) {
  std::vector<double> v(102);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 + std::sin(0.3 * static_cast<double>(i));
  const auto p = FbmPath::injected(v, 100, 1.0, HurstParameter(0.4));
  const auto a = centered_quadvar_abs(p, 1.0), b = centered_quadvar(p, 1.0);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(crossing_decomposition_check(p, 1.0).pointwise, 0.0);
}

TEST(CrossingDecomposition, CrossingStepShrinksByFourProducts) {
  // A step from a < 0 to b > 0: (|b| - |a|)^2 - (b - a)^2 = -4|ab|.
  const double a = -0.3, b = 0.8;
  const double lhs = std::pow(std::fabs(b) - std::fabs(a), 2) - std::pow(b - a, 2);
  EXPECT_NEAR(lhs, -4.0 * std::fabs(a * b), 1e-15);
}

TEST(CrossingDecomposition, FbmPathsSatisfyIdentity) {
  for (double h : {0.3, 0.5, 0.6, 0.85}) {
    const auto p = simulate_fbm(1024, HurstParameter(h), 1.0, 1.0, 21);
    const auto r = crossing_decomposition_check(p, 1.0);
    EXPECT_LT(r.pointwise, 1e-12 * r.scale * r.scale) << "H=" << h;
  }
}

TEST(CrossingDecomposition, AggregateMatchesFunctionalForm) {
  // n^{-1} S_n = M - 2 n^{-H} V(f2), V(f2) with u_n = n^H at level 0.
  const std::uint64_t n = 2048;
  const double h = 0.3;
  const auto p = simulate_fbm(n, HurstParameter(h), 1.0, 1.0, 22);
  const auto s = centered_quadvar_abs(p, 1.0);
  const auto m = centered_quadvar(p, 1.0);
  const auto v = v_statistic_bivariate(p, make_f2(), h, 0.0);
  for (std::size_t i = 0; i <= p.last_index(); i += 101) {
    const double lhs = s.values[i] / n;
    const double rhs = m.values[i] / n - 2.0 * std::pow(double(n), -h) * v.values[i];
    EXPECT_NEAR(lhs, rhs, 1e-10 * (1.0 + std::fabs(lhs)));
  }
}

TEST(CrossingDecomposition, AbsoluteVersionNeverExceedsPlainVersion) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = simulate_fbm(512, HurstParameter(0.3), 1.0, 1.0, seed);
    const auto a = centered_quadvar_abs(p, 1.0), b = centered_quadvar(p, 1.0);
    for (std::size_t i = 0; i < a.values.size(); ++i)
      EXPECT_LE(a.values[i], b.values[i] + 1e-9 * (1.0 + std::fabs(b.values[i])));
  }
}

TEST(ScaledStatistic, Factors) {
  const auto check = [](double h, double factor) {
    const auto p = simulate_fbm(1024, HurstParameter(h), 1.0, 1.0, 9);
    const auto s = centered_quadvar_abs(p, 1.0);
    const auto sc = scaled_statistic(s, regime_limit(HurstParameter(h)));
    EXPECT_NEAR(sc.at(1.0), factor * s.at(1.0), 1e-12 * std::fabs(factor * s.at(1.0)));
    EXPECT_TRUE(sc.warnings.empty());
  };
  check(0.5, std::pow(1024.0, -0.5));
  check(0.85, std::pow(1024.0, -0.7));
  check(0.3, std::pow(1024.0, -0.7));
}

TEST(ScaledStatistic, RegimeMismatchFlagged) {
  const auto p = simulate_fbm(256, HurstParameter(0.6), 1.0, 1.0, 10);
  const auto s = centered_quadvar_abs(p, 1.0);
  const auto sc = scaled_statistic(s, regime_limit(Regime::LT, HurstParameter(0.6)));
  EXPECT_FALSE(sc.warnings.empty());
}

TEST(ScaledStatistic, QuadvarPartVanishesBelowOneHalf) {
  // Var(n^H M_1) ~ n^{2H-1}: the log-variance slope in n is 2H - 1.
  const double h = 0.3;
  std::vector<double> lx, ly;
  for (std::uint64_t n : {256, 1024, 4096}) {
    const FbmSampler sampler(n, HurstParameter(h), 1.0, 1.0);
    std::vector<double> x;
    for (std::uint64_t r = 0; r < 300; ++r)
      x.push_back(std::pow(double(n), h) * centered_quadvar(sampler.sample(derive_seed(n, r)), 1.0).at(1.0) / n);
    lx.push_back(std::log(double(n)));
    ly.push_back(std::log(stats::variance(x)));
  }
  const auto fit = stats::ols(lx, ly);
  EXPECT_LT(fit.slope, 0.0);
  EXPECT_NEAR(fit.slope, 2 * h - 1, 0.15);
}

TEST(SigmaEstimate, RecoversScale) {
  const auto p = simulate_fbm(8192, HurstParameter(0.3), 1.7, 1.0, 11);
  EXPECT_NEAR(estimate_sigma_squared(p), 1.7 * 1.7, 0.1 * 1.7 * 1.7);
}
