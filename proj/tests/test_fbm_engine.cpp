#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "fraclt/covariance.hpp"
#include "fraclt/errors.hpp"
#include "fraclt/fbm.hpp"
#include "fraclt/parallel.hpp"
#include "fraclt/rng.hpp"
#include "fraclt/stats.hpp"

using namespace fraclt;

namespace {

// Independent oracles in long double, written from the kernel definition.
long double kernel_ld(long double s, long double t, long double h) {
  return 0.5L * (powl(t, 2 * h) + powl(s, 2 * h) - powl(fabsl(t - s), 2 * h));
}

long double gamma_ld(long double k, long double h) {
  return 0.5L * (powl(k + 1, 2 * h) + powl(fabsl(k - 1), 2 * h) - 2 * powl(k, 2 * h));
}

// v^2 by brute force: partial sum of rho_k^2 to K plus an integral estimate
// of the remainder from the leading asymptotic rho_k ~ H(2H-1) k^{2H-2}.
double v2_brute_force(double sigma, double h, long K) {
  const long double hh = h;
  long double s = 0.0L;
  long double prev = 0.0L, cur = 1.0L, next = powl(2.0L, 2 * hh);  // (k-1)^{2H}, k^{2H}, (k+1)^{2H}
  for (long k = 1; k <= K; ++k) {
    const long double r = 0.5L * (next + prev - 2 * cur);
    s += r * r;
    prev = cur;
    cur = next;
    next = powl(static_cast<long double>(k + 2), 2 * hh);
  }
  const long double c = hh * (2 * hh - 1);
  const long double p = 4 * hh - 4;  // exponent of rho_k^2
  const long double tail = c * c * powl(static_cast<long double>(K) + 0.5L, p + 1) / -(p + 1);
  return static_cast<double>(2.0L * powl(sigma, 4) * (1.0L + 2.0L * (s + tail)));
}

}  // namespace

TEST(HurstParameter, RejectsBoundaryValues) {
  EXPECT_THROW(HurstParameter(0.0), DomainError);
  EXPECT_THROW(HurstParameter(1.0), DomainError);
  EXPECT_THROW(HurstParameter(-0.2), DomainError);
  EXPECT_NO_THROW(HurstParameter(0.75));
}

TEST(HurstParameter, RegimeSplit) {
  EXPECT_EQ(HurstParameter(0.3).regime(), Regime::LT);
  EXPECT_EQ(HurstParameter(0.5).regime(), Regime::Boundary);
  EXPECT_EQ(HurstParameter(0.6).regime(), Regime::CLT);
  EXPECT_EQ(HurstParameter(0.85).regime(), Regime::Rosenblatt);
  EXPECT_THROW(HurstParameter(0.75).regime(), UnsupportedRegimeError);
}

TEST(FbmCovariance, Examples) {
  EXPECT_NEAR(fbm_covariance(2, 2, HurstParameter(0.7)), std::pow(2.0, 1.4), 1e-14);
  EXPECT_NEAR(fbm_covariance(1, 2, HurstParameter(0.5)), 1.0, 1e-15);
  const double oracle = static_cast<double>(kernel_ld(1, 2, 0.7L));
  EXPECT_NEAR(fbm_covariance(1, 2, HurstParameter(0.7)), oracle, 1e-14);
  EXPECT_NEAR(oracle, 1.31951, 1e-5);
}

TEST(FbmCovariance, SymmetricAndDiagonal) {
  for (double h : {0.1, 0.3, 0.5, 0.8, 0.95})
    for (double s : {0.0, 0.25, 1.0, 3.5})
      for (double t : {0.0, 0.5, 2.0}) {
        const HurstParameter hp(h);
        EXPECT_EQ(fbm_covariance(s, t, hp), fbm_covariance(t, s, hp));
        EXPECT_NEAR(fbm_covariance(t, t, hp), std::pow(t, 2 * h), 1e-14);
      }
}

TEST(FbmCovariance, NegativeTimeRejected) {
  EXPECT_THROW(fbm_covariance(-1, 1, HurstParameter(0.3)), DomainError);
  EXPECT_THROW(fbm_covariance(1, -1e-9, HurstParameter(0.3)), DomainError);
}

TEST(FbmCovariance, KernelMatrixPositiveSemidefinite) {
  for (double h : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (int n : {8, 32, 64}) {
      Eigen::MatrixXd k(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          k(i, j) = fbm_covariance((i + 1.0) / n, (j + 1.0) / n, HurstParameter(h));
      EXPECT_TRUE(k.isApprox(k.transpose(), 0.0));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10 * k.trace()) << "H=" << h << " n=" << n;
    }
  }
}

TEST(IncrementAutocovariance, Examples) {
  for (double h : {0.2, 0.5, 0.9}) EXPECT_EQ(increment_autocovariance(0, HurstParameter(h)), 1.0);
  EXPECT_NEAR(increment_autocovariance(3, HurstParameter(0.5)), 0.0, 1e-15);
  const double oracle = static_cast<double>(gamma_ld(1, 0.7L));
  EXPECT_NEAR(increment_autocovariance(1, HurstParameter(0.7)), oracle, 1e-14);
  EXPECT_NEAR(oracle, 0.31951, 1e-5);
}

TEST(IncrementAutocovariance, MatchesOraclesAtLargeLags) {
  for (double h : {0.3, 0.6, 0.85}) {
    for (std::uint64_t k : {10ULL, 1000ULL}) {
      const double oracle = static_cast<double>(gamma_ld(static_cast<long double>(k), h));
      EXPECT_NEAR(increment_autocovariance(k, HurstParameter(h)), oracle, 1e-9 * std::fabs(oracle))
          << "H=" << h << " k=" << k;
    }
    // Far out the second difference cancels even in long double; compare
    // with H(2H-1) k^{2H-2} (1 + (2H-2)(2H-3) / (12 k^2)).
    const double k = 1e5;
    const double lead = h * (2 * h - 1) * std::pow(k, 2 * h - 2) *
                        (1 + (2 * h - 2) * (2 * h - 3) / (12 * k * k));
    EXPECT_NEAR(increment_autocovariance(100000, HurstParameter(h)), lead, 1e-9 * std::fabs(lead));
  }
}

TEST(IncrementAutocovariance, SecondDifferenceIdentity) {
  for (double h : {0.2, 0.3, 0.5, 0.6, 0.85})
    for (std::uint64_t n : {4ULL, 64ULL, 1024ULL})
      for (std::uint64_t i : {0ULL, 1ULL, 5ULL})
        for (std::uint64_t k : {0ULL, 1ULL, 2ULL, 3ULL}) {
          const HurstParameter hp(h);
          const std::uint64_t j = i + k;
          const double a = fbm_covariance((i + 1.0) / n, (j + 1.0) / n, hp);
          const double b = fbm_covariance((i + 1.0) / n, double(j) / n, hp);
          const double c = fbm_covariance(double(i) / n, (j + 1.0) / n, hp);
          const double d = fbm_covariance(double(i) / n, double(j) / n, hp);
          const double rhs = std::pow(double(n), 2 * h) * (a - b - c + d);
          const double lhs = increment_autocovariance(k, hp);
          // Relative to the size of the terms being differenced.
          const double scale = std::pow(double(n), 2 * h) * std::max({a, b, c, d, 1e-300});
          EXPECT_LE(std::fabs(lhs - rhs), 1e-12 * std::max(1.0, scale))
              << "H=" << h << " n=" << n << " i=" << i << " k=" << k;
        }
}

TEST(RhoLevelIncrement, Examples) {
  EXPECT_NEAR(rho_level_increment(1, HurstParameter(0.5)), 0.0, 1e-15);
  EXPECT_NEAR(rho_level_increment(1, HurstParameter(0.7)), 0.5 * (std::pow(2.0, 1.4) - 2.0), 1e-14);
  EXPECT_THROW(rho_level_increment(0, HurstParameter(0.3)), DomainError);
}

TEST(RhoLevelIncrement, BoundedAndDecaying) {
  for (double h : {0.1, 0.3, 0.7, 0.9}) {
    double prev = 1.0;
    for (std::uint64_t i = 1; i <= 1000000; i *= 10) {
      const double r = rho_level_increment(i, HurstParameter(h));
      EXPECT_LT(std::fabs(r), 1.0);
      if (i > 1) EXPECT_LT(std::fabs(r), prev + 1e-15);
      prev = std::fabs(r);
    }
  }
}

TEST(RhoLevelIncrement, LargeIndexMatchesClosedForm) {
  // For H < 1/2 the -1 term dominates and rho_i ~ -i^{-H}/2, so at i = 1e6,
  // H = 0.3 the value is about -0.0079, not below 1e-3.
  const long double i = 1e6L, h = 0.3L;
  const long double oracle = (powl(i + 1, 2 * h) - powl(i, 2 * h) - 1) / (2 * powl(i, h));
  EXPECT_NEAR(rho_level_increment(1000000, HurstParameter(0.3)), static_cast<double>(oracle), 1e-12);
  EXPECT_LT(std::fabs(rho_level_increment(1000000, HurstParameter(0.3))), 1e-2);
}

TEST(AsymptoticVarianceV2, BrownianValues) {
  EXPECT_NEAR(asymptotic_variance_v2(1.0, HurstParameter(0.5), 1e-12), 2.0, 1e-12);
  EXPECT_NEAR(asymptotic_variance_v2(2.0, HurstParameter(0.5), 1e-12), 32.0, 1e-10);
}

TEST(AsymptoticVarianceV2, RejectsRosenblattRegime) {
  EXPECT_THROW(asymptotic_variance_v2(1.0, HurstParameter(0.75)), DomainError);
  EXPECT_THROW(asymptotic_variance_v2(1.0, HurstParameter(0.85)), DomainError);
  EXPECT_THROW(asymptotic_variance_v2(1.0, HurstParameter(0.6), 0.0), DomainError);
}

TEST(AsymptoticVarianceV2, MatchesBruteForceSeries) {
  for (double h : {0.3, 0.6, 0.7}) {
    const double oracle = v2_brute_force(1.0, h, h == 0.6 ? 10000000 : 2000000);
    const double v = asymptotic_variance_v2(1.0, HurstParameter(h), 1e-8);
    EXPECT_NEAR(v, oracle, 1e-6 * oracle) << "H=" << h;
  }
}

TEST(SimulateFbm, GridContract) {
  const auto p = simulate_fbm(100, HurstParameter(0.3), 2.0, 1.5, 9);
  EXPECT_EQ(p.values.size(), 152u);  // [nT] + 2
  EXPECT_EQ(p.values[0], 0.0);
  EXPECT_EQ(p.last_index(), 150u);
  EXPECT_THROW(simulate_fbm(1, HurstParameter(0.3), 1.0, 1.0, 1), DomainError);
  EXPECT_THROW(simulate_fbm(8, HurstParameter(0.3), -1.0, 1.0, 1), DomainError);
  EXPECT_THROW(simulate_fbm(8, HurstParameter(0.3), 1.0, 0.0, 1), DomainError);
}

TEST(SimulateFbm, BitIdenticalAcrossWorkers) {
  const std::size_t reps = 16;
  std::vector<std::vector<double>> one(reps), many(reps);
  const FbmSampler sampler(1000, HurstParameter(0.7), 1.0, 1.0);
  parallel_for(reps, 1, [&](std::size_t r) { one[r] = sampler.sample(derive_seed(42, r)).values; });
  parallel_for(reps, 8, [&](std::size_t r) { many[r] = sampler.sample(derive_seed(42, r)).values; });
  for (std::size_t r = 0; r < reps; ++r) EXPECT_EQ(one[r], many[r]);
  EXPECT_EQ(simulate_fbm(1000, HurstParameter(0.7), 1.0, 1.0, derive_seed(42, 3)).values, one[3]);
}

TEST(SimulateFbm, BrownianVarianceAtTwoPoints) {
  std::vector<double> x1;
  const FbmSampler sampler(2, HurstParameter(0.5), 1.0, 1.0);
  for (std::uint64_t r = 0; r < 20000; ++r) x1.push_back(sampler.sample(derive_seed(5, r)).values[2]);
  const auto s = stats::summarize(x1);
  // Var of the sample variance of N(0,1) is 2/(N-1).
  EXPECT_NEAR(s.variance, 1.0, 4.0 * std::sqrt(2.0 / 19999.0));
  EXPECT_NEAR(s.mean, 0.0, 4.0 * s.se_mean);
}

TEST(SimulateFbm, SampleCovarianceMatchesKernel) {
  const std::uint64_t n = 512, reps = 10000;
  const FbmSampler sampler(n, HurstParameter(0.7), 1.0, 1.0);
  std::vector<double> prod;
  for (std::uint64_t r = 0; r < reps; ++r) {
    const auto p = sampler.sample(derive_seed(11, r));
    prod.push_back(p.values[n / 2] * p.values[n]);
  }
  const auto s = stats::summarize(prod);
  const double target = fbm_covariance(0.5, 1.0, HurstParameter(0.7));
  EXPECT_NEAR(target, 0.5, 1e-15);  // ½(0.5^{1.4} + 1 - 0.5^{1.4})
  EXPECT_NEAR(s.mean, target, 4.0 * s.se_mean);
}

TEST(SimulateFbm, GeneratorCovarianceSuite) {
  // Ten random pairs at n = 256 per H, at a reduced replicate count.
  for (double h : {0.3, 0.5, 0.7}) {
    const std::uint64_t n = 256, reps = 4000;
    const FbmSampler sampler(n, HurstParameter(h), 1.0, 1.0);
    Xoshiro256 pick(derive_seed(17, 0));
    std::vector<std::pair<int, int>> pairs;
    for (int k = 0; k < 10; ++k) pairs.emplace_back(1 + pick() % n, 1 + pick() % n);
    std::vector<std::vector<double>> prod(pairs.size());
    for (std::uint64_t r = 0; r < reps; ++r) {
      const auto p = sampler.sample(derive_seed(23, r));
      for (std::size_t k = 0; k < pairs.size(); ++k)
        prod[k].push_back(p.values[pairs[k].first] * p.values[pairs[k].second]);
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto s = stats::summarize(prod[k]);
      const double target = fbm_covariance(pairs[k].first / 256.0, pairs[k].second / 256.0, HurstParameter(h));
      EXPECT_NEAR(s.mean, target, 4.0 * s.se_mean) << "H=" << h;
    }
  }
}

TEST(SimulateFbm, DenseAndCirculantAgreeInLaw) {
  SamplerOptions dense;
  dense.method = Generator::DenseFactorization;
  const FbmSampler a(128, HurstParameter(0.3), 1.0, 1.0);
  const FbmSampler b(128, HurstParameter(0.3), 1.0, 1.0, dense);
  EXPECT_EQ(a.method(), Generator::CirculantEmbedding);
  EXPECT_EQ(b.method(), Generator::DenseFactorization);
  std::vector<double> xa, xb;
  for (std::uint64_t r = 0; r < 2000; ++r) {
    xa.push_back(a.sample(derive_seed(1, r)).values[128]);
    xb.push_back(b.sample(derive_seed(2, r)).values[128]);
  }
  EXPECT_GT(stats::ks_two_sample(xa, xb).p_value, 1e-3);
}

TEST(SimulateFbm, DenseCapRaisesResourceError) {
  SamplerOptions dense;
  dense.method = Generator::DenseFactorization;
  dense.dense_cap = 100;
  EXPECT_THROW(FbmSampler(1000, HurstParameter(0.3), 1.0, 1.0, dense), ResourceError);
}

TEST(SimulateFbm, SelfSimilarScaling) {
  // sigma B^H_{ct} has the law of sigma c^H B^H_t: compare Var(X_T) at two horizons.
  std::vector<double> a, b;
  const FbmSampler s1(64, HurstParameter(0.3), 1.0, 1.0), s4(64, HurstParameter(0.3), 1.0, 4.0);
  for (std::uint64_t r = 0; r < 8000; ++r) {
    a.push_back(s1.sample(derive_seed(3, r)).values[64]);
    b.push_back(s4.sample(derive_seed(4, r)).values[256] / std::pow(4.0, 0.3));
  }
  EXPECT_GT(stats::ks_two_sample(a, b).p_value, 1e-3);
}

TEST(PathCsv, RoundTripIsBitIdentical) {
  const auto p = simulate_fbm(333, HurstParameter(0.3), 1.7, 1.0, 77);
  std::stringstream ss;
  write_path_csv(p, ss);
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "t,x");
  ss.seekg(0);
  const auto q = read_path_csv(ss, HurstParameter(0.3), 1.7);
  EXPECT_EQ(q.n, 333u);
  EXPECT_EQ(q.values, p.values);
}

TEST(PathCsv, MalformedInputRejected) {
  std::stringstream bad("t,y\n0,0\n");
  EXPECT_THROW(read_path_csv(bad, HurstParameter(0.3), 1.0), ConfigError);
  std::stringstream garbage("t,x\n0,0\n0.5,abc\n1,2\n");
  EXPECT_THROW(read_path_csv(garbage, HurstParameter(0.3), 1.0), ConfigError);
}
