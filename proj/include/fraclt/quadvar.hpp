#pragma once

#include <string>
#include <vector>

#include "fraclt/fbm.hpp"
#include "fraclt/hurst.hpp"
#include "fraclt/vstat.hpp"

namespace fraclt {

/// Limit object of the centered quadratic variation of |X| in one regime.
/// The limits W and R are descriptors only; nothing here simulates them.
struct RegimeLimit {
  Regime regime = Regime::LT;
  double hurst = 0.0;
  // Power of n multiplying S_n: H-1, -1/2, -1/2, 1-2H.
  double scaling_exponent = 0.0;
  // Multiple of E|sigma N|^3 L_t(0) in the limit: -2/3 for LT and BOUNDARY
  // (the crossing correction is -2 V(f2) and V(f2) -> (1/3) E|sigma N|^3 L),
  // 0 otherwise.
  double local_time_coefficient = 0.0;
  std::string limit_descriptor;
  std::vector<std::string> checkable_signatures;
};

/// Throws UnsupportedRegimeError at H = 3/4 (via HurstParameter::regime).
RegimeLimit regime_limit(HurstParameter h);
/// Limit for an explicitly chosen regime, used to probe mismatched paths.
RegimeLimit regime_limit(Regime regime, HurstParameter h);

struct PathMeta {
  double hurst = 0.0;
  double sigma = 0.0;
  std::uint64_t n = 0;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  PathOrigin origin = PathOrigin::Injected;
};

/// S_n(t) = sum_{i=0}^{[nt]} ((n^H D_i |X|)^2 - sigma^2) on every grid t.
struct QuadVarStatistic {
  std::vector<double> times;
  std::vector<double> values;
  double sigma_assumed = 1.0;
  PathMeta path_meta;
  std::vector<std::string> warnings;

  double at(double t) const;
};

QuadVarStatistic centered_quadvar_abs(const FbmPath& path, double sigma);
/// Same sum for X itself (no absolute value).
QuadVarStatistic centered_quadvar(const FbmPath& path, double sigma);

struct DecompositionResidual {
  // max_i |(D|X|)^2 - (DX)^2 + 4|X_i X_{i+1}| 1{X_i X_{i+1} < 0}|
  double pointwise = 0.0;
  // max_t |n^{-1} S_n(t) - M_t + 2 n^{-H} V(f2)_t|
  double aggregate = 0.0;
  // max_i |X_i|, the path scale
  double scale = 0.0;
};

/// Checks the crossing identity termwise and the decomposition
/// n^{-1} S_n = M - 2 n^{-H} V(f2) (with u_n = n^H, x = 0), where
/// M = n^{-1} sum ((n^H D_i X)^2 - sigma^2). A step across zero from a to b
/// shrinks the squared increment by exactly 4|ab|, and
/// f2(n^H a, n^H (b - a)) = 2 n^{2H} |ab|. Throws
/// AlgebraViolation if the pointwise residual exceeds 1e-9 scale^2 or the
/// aggregate one exceeds 1e-9 times the summed term magnitude.
DecompositionResidual crossing_decomposition_check(const FbmPath& path, double sigma);

/// n^{scaling_exponent} S_n(t). A regime not matching the path's H is
/// allowed but recorded in the warnings.
StatisticPath scaled_statistic(const QuadVarStatistic& stat, const RegimeLimit& regime);

/// sigma^2 estimate n^{2H} sum_{i<[nT]} (D_i X)^2 / [nT]. Not used by any
/// verification; the statistics take sigma as an input.
double estimate_sigma_squared(const FbmPath& path);

}  // namespace fraclt
