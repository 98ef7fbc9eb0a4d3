#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fraclt/fbm.hpp"
#include "fraclt/hurst.hpp"

namespace fraclt {

enum class ExperimentKind { Consistency, Regime, Audit };

std::string_view kind_name(ExperimentKind k);
ExperimentKind parse_kind(std::string_view name);
/// "prop2..." runs the regime checks, "audit..." the generator audit, any
/// other name the consistency experiment.
ExperimentKind infer_kind(std::string_view experiment_name);

struct ExperimentConfig {
  std::string name = "experiment";
  std::optional<ExperimentKind> kind;
  double hurst = 0.3;
  double sigma = 1.0;
  std::vector<std::uint64_t> n_grid{1024, 4096, 16384};
  std::uint64_t replicates = 200;
  std::optional<std::uint64_t> seed;  // required to run
  double horizon = 1.0;

  // Consistency experiments.
  std::string functional = "f1";
  double level = 0.0;
  std::optional<double> un_exponent;  // default H, i.e. u_n = n^H
  std::uint64_t time_grid = 16;       // points of the supremum probe

  // Local-time oracle: grid frequency refinement * max(n_grid).
  std::uint64_t refinement = 4;
  std::optional<double> epsilon;  // default 4 m^{-H}

  // Regime experiments.
  std::optional<Regime> regime;  // default: the regime of `hurst`
  bool allow_regime_mismatch = false;
  // Multiple of E|sigma N|^3 L_T(0) that the LT and BOUNDARY checks subtract
  // or divide by; default -2/3, the coefficient of the exact decomposition.
  std::optional<double> lt_coefficient;

  // Tolerances; unset ones take the per-check defaults.
  std::optional<double> ratio_tolerance;     // 0.10 consistency, 0.15 LT
  std::optional<double> variance_tolerance;  // 0.10 CLT, 0.15 boundary
  double slope_tolerance = 0.15;
  double z_threshold = 4.0;
  double v2_tolerance = 1e-10;

  // Generator audit.
  std::uint64_t audit_n = 256;
  std::uint64_t audit_pairs = 10;
  std::uint64_t ks_n = 128;
  std::uint64_t ks_replicates = 2000;
  double ks_alpha = 1e-3;
  // Negative control: paths are generated with this H while the audit
  // checks against `hurst`.
  std::optional<double> corrupt_hurst;

  ExperimentKind resolved_kind() const { return kind.value_or(infer_kind(name)); }
  /// Throws ConfigError on inconsistent or out-of-range settings.
  void validate() const;
  /// Applies one `key = value` setting; unknown keys throw ConfigError.
  void set(const std::string& key, const std::string& value);
  /// Resolved settings as ordered key/value strings (the config echo).
  std::vector<std::pair<std::string, std::string>> entries() const;
};

/// Flat `key = value` file, `#` starts a comment.
ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig load_experiment_config(const std::string& file);

struct Verdict {
  std::string rule;
  bool passed = false;
  std::string effect_name;
  double effect = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct Regression {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  double slope = 0.0;
  double slope_se = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::optional<double> target;
};

struct PerN {
  std::uint64_t n = 0;
  std::vector<std::pair<std::string, double>> metrics;
  double metric(const std::string& key) const;
};

struct RuntimeInfo {
  std::string generator;
  std::uint64_t paths = 0;
  std::uint64_t oracle_flagged = 0;
  // Largest crossing-identity residual divided by the squared path scale.
  double max_decomposition_residual = 0.0;
  std::string seed_rule;
  std::vector<std::uint64_t> replicate_seeds;
  std::vector<std::string> warnings;
  // Only filled on request; it would break byte-identical reports.
  std::optional<double> wall_seconds;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<PerN> per_n;
  std::vector<Regression> regressions;
  std::vector<Verdict> verdicts;
  RuntimeInfo runtime;

  bool all_passed() const;
  const Verdict* verdict(const std::string& rule) const;
  std::string to_json() const;
  /// One row per (n, metric).
  void write_csv(std::ostream& out) const;
};

/// Source of replicate paths for the audit: (replicate seed, n, H, sigma,
/// horizon) -> path. Tests inject corrupted generators through this.
using PathSource = std::function<FbmPath(std::uint64_t seed, std::uint64_t n, HurstParameter h,
                                         double sigma, double horizon)>;

struct RunOptions {
  unsigned threads = 1;
  PathSource path_source;  // audit only; default is the exact sampler
};

ExperimentReport run_consistency_experiment(const ExperimentConfig& config, const RunOptions& run = {});
ExperimentReport run_regime_experiment(const ExperimentConfig& config, const RunOptions& run = {});
ExperimentReport run_generator_audit(const ExperimentConfig& config, const RunOptions& run = {});
/// Dispatches on config.resolved_kind().
ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& run = {});

}  // namespace fraclt
