#include "fraclt/hurst.hpp"

#include <cmath>
#include <string>

#include "fraclt/errors.hpp"

namespace fraclt {

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::LT: return "LT";
    case Regime::Boundary: return "BOUNDARY";
    case Regime::CLT: return "CLT";
    case Regime::Rosenblatt: return "ROSENBLATT";
  }
  return "?";
}

Regime parse_regime(std::string_view name) {
  if (name == "LT") return Regime::LT;
  if (name == "BOUNDARY") return Regime::Boundary;
  if (name == "CLT") return Regime::CLT;
  if (name == "ROSENBLATT") return Regime::Rosenblatt;
  throw ConfigError("unknown regime '" + std::string(name) +
                    "' (expected LT, BOUNDARY, CLT or ROSENBLATT)");
}

HurstParameter::HurstParameter(double value) : value_(value) {
  if (!std::isfinite(value) || value <= 0.0 || value >= 1.0)
    throw DomainError("Hurst parameter must lie in the open interval (0,1), got " +
                      std::to_string(value));
}

Regime HurstParameter::regime() const {
  if (value_ < 0.5) return Regime::LT;
  if (value_ == 0.5) return Regime::Boundary;
  if (value_ < 0.75) return Regime::CLT;
  if (value_ == 0.75)
    throw UnsupportedRegimeError(
        "H = 3/4 is not covered by the quadratic-variation regimes "
        "(boundary between CLT and Rosenblatt limits)");
  return Regime::Rosenblatt;
}

}  // namespace fraclt
