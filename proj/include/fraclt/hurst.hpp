#pragma once

#include <string_view>

namespace fraclt {

// Limit regimes of the centered quadratic variation of |X|.
enum class Regime {
  LT,          // H < 1/2: local time at zero dominates
  Boundary,    // H = 1/2: Gaussian part plus local time
  CLT,         // 1/2 < H < 3/4: Gaussian limit
  Rosenblatt,  // 3/4 < H < 1: non-Gaussian limit
};

std::string_view regime_name(Regime r);
Regime parse_regime(std::string_view name);

/// Hurst index of a fractional Brownian motion, strictly inside (0, 1).
///
/// Any value in the open interval constructs; `regime()` throws
/// UnsupportedRegimeError for H = 3/4, which sits between the CLT and
/// Rosenblatt regimes and carries logarithmic corrections.
class HurstParameter {
 public:
  explicit HurstParameter(double value);

  double value() const noexcept { return value_; }
  double two_h() const noexcept { return 2.0 * value_; }
  Regime regime() const;

  friend bool operator==(const HurstParameter&, const HurstParameter&) = default;

 private:
  double value_;
};

}  // namespace fraclt
