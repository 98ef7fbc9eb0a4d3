// Command-line front end: simulate paths, evaluate statistics, run experiments
// and draw plots.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fraclt/covariance.hpp"
#include "fraclt/errors.hpp"
#include "fraclt/experiment.hpp"
#include "fraclt/fbm.hpp"
#include "fraclt/functionals.hpp"
#include "fraclt/limit_constant.hpp"
#include "fraclt/local_time.hpp"
#include "fraclt/parallel.hpp"
#include "fraclt/plot.hpp"
#include "fraclt/quadvar.hpp"
#include "fraclt/vstat.hpp"

using namespace fraclt;
using json = nlohmann::ordered_json;

namespace {

struct PathArgs {
  std::string file;
  double hurst = 0.5;
  double sigma = 1.0;
  std::uint64_t n = 0;
  double horizon = 1.0;
  std::optional<std::uint64_t> seed;

  void add(CLI::App* app) {
    app->add_option("--path", file, "Path CSV (t,x); omit to simulate one");
    app->add_option("--hurst", hurst, "Hurst parameter of the path")->required();
    app->add_option("--sigma", sigma, "Scale sigma of the path")->capture_default_str();
    app->add_option("--n", n, "Sampling frequency when simulating");
    app->add_option("--horizon", horizon, "Horizon T when simulating")->capture_default_str();
    app->add_option("--seed", seed, "Seed when simulating (required then)");
  }

  FbmPath load() const {
    if (!file.empty()) return read_path_csv(file, HurstParameter(hurst), sigma);
    if (!seed) throw ConfigError("--seed is required when no --path is given");
    if (n == 0) throw ConfigError("--n is required when no --path is given");
    return simulate_fbm(n, HurstParameter(hurst), sigma, horizon, *seed);
  }
};

std::ostream& open_out(const std::string& file, std::ofstream& holder) {
  if (file.empty() || file == "-") return std::cout;
  holder.open(file);
  if (!holder) throw ConfigError("cannot open '" + file + "' for writing");
  return holder;
}

std::string read_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open '" + file + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void log_config(const CLI::App& sub) {
  std::cerr << "# " << sub.get_name() << " resolved configuration\n"
            << sub.config_to_str(true, false);
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

int report_error(const char* type, const std::string& message, const std::string& diagnostics,
                 int code, bool as_json) {
  if (as_json) {
    json e;
    e["error"] = {{"type", type}, {"message", message}, {"diagnostics", diagnostics},
                  {"exit_code", code}};
    std::cerr << e.dump() << '\n';
  } else {
    std::cerr << "error (" << type << "): " << message << '\n';
    if (!diagnostics.empty()) std::cerr << "  " << diagnostics << '\n';
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fraclt: fractional Brownian motion, local-time statistics and limit-theorem checks"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::optional<long> threads;
  bool json_errors = false;
  app.add_option("--threads", threads, "Worker threads (default FRACLT_THREADS, else all cores)");
  app.add_flag("--json-errors", json_errors, "Report errors as JSON on stderr");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate one fBm path and write it as CSV");
  double sim_hurst = 0.5, sim_sigma = 1.0, sim_horizon = 1.0;
  std::uint64_t sim_n = 0, sim_seed = 0;
  std::string sim_out, sim_method = "circulant";
  sim->add_option("--hurst", sim_hurst, "Hurst parameter in (0,1)")->required();
  sim->add_option("--n", sim_n, "Sampling frequency (grid step 1/n)")->required();
  sim->add_option("--sigma", sim_sigma, "Scale sigma")->capture_default_str();
  sim->add_option("--horizon", sim_horizon, "Horizon T")->capture_default_str();
  sim->add_option("--seed", sim_seed, "Random seed")->required();
  sim->add_option("--method", sim_method, "circulant or dense")->capture_default_str()
      ->check(CLI::IsMember({"circulant", "dense"}));
  sim->add_option("--out", sim_out, "Output CSV (default stdout)");

  // localtime
  auto* lt = app.add_subcommand("localtime", "Occupation-density estimate of the local time");
  PathArgs lt_path;
  lt_path.add(lt);
  double lt_level = 0.0;
  std::optional<double> lt_time, lt_eps;
  std::uint64_t lt_ref = 1;
  double lt_scale = 1.0;
  std::string lt_curve;
  lt->add_option("--level", lt_level, "Level x")->capture_default_str();
  lt->add_option("--time", lt_time, "Time t (default the horizon)");
  lt->add_option("--epsilon", lt_eps, "Bandwidth (default 4 m^-H)");
  lt->add_option("--refinement", lt_ref, "Interpolation factor m/n")->capture_default_str();
  lt->add_option("--curve-out", lt_curve, "Write scale * L_t(x) on the path grid as CSV");
  lt->add_option("--curve-scale", lt_scale, "Multiplier for --curve-out")->capture_default_str();

  // vstat
  auto* vs = app.add_subcommand("vstat", "V(f) or V(g) statistic path");
  PathArgs vs_path;
  vs_path.add(vs);
  std::string vs_functional, vs_kernel, vs_out;
  double vs_level = 0.0;
  std::optional<double> vs_un;
  auto* vs_f = vs->add_option("--functional", vs_functional, "Bivariate functional: f1, f2, zero");
  auto* vs_g = vs->add_option("--kernel", vs_kernel, "Univariate kernel: indicator, gauss");
  vs_f->excludes(vs_g);
  vs->add_option("--level", vs_level, "Level x")->capture_default_str();
  vs->add_option("--un-exponent", vs_un, "u_n = n^a (default a = H)");
  vs->add_option("--out", vs_out, "Statistic CSV (t,value)");

  // quadvar
  auto* qv = app.add_subcommand("quadvar", "Centered quadratic variation of |X| and its scaling");
  PathArgs qv_path;
  qv_path.add(qv);
  std::optional<double> qv_center;
  std::string qv_regime = "auto", qv_out;
  qv->add_option("--sigma-center", qv_center, "Centering sigma (default the path sigma)");
  qv->add_option("--regime", qv_regime, "LT, BOUNDARY, CLT, ROSENBLATT or auto")->capture_default_str();
  qv->add_option("--out", qv_out, "Scaled statistic CSV (t,value)");

  // constants
  auto* cs = app.add_subcommand("constants", "Limit constant of a bivariate functional");
  std::string cs_f;
  double cs_sigma = 1.0;
  int cs_degree = 64;
  cs->add_option("--f", cs_f, "Functional: f1, f2, zero")->required();
  cs->add_option("--sigma", cs_sigma, "Scale sigma")->capture_default_str();
  cs->add_option("--degree", cs_degree, "Hermite degree")->capture_default_str();

  // experiment and audit share the flag set
  struct ExpArgs {
    std::string config_file, out, csv;
    std::vector<std::string> sets;
    bool strict = false, timing = false;
    std::vector<std::pair<std::string, CLI::Option*>> keyed;
    std::vector<std::string> values;
  };
  ExpArgs ex, au;
  const auto add_exp = [](CLI::App* sub, ExpArgs& a, bool audit) {
    a.values.reserve(32);
    const auto keyed = [&](const std::string& flag, const std::string& key, const std::string& help) {
      a.values.emplace_back();
      a.keyed.emplace_back(key, sub->add_option(flag, a.values.back(), help));
    };
    sub->add_option("--config", a.config_file, "Flat key = value experiment file");
    keyed("--name", "name", "Experiment name (prop2-* regime, audit-* audit)");
    keyed("--hurst", "hurst", "Hurst parameter");
    keyed("--sigma", "sigma", "Scale sigma");
    keyed("--reps", "replicates", "Replicates");
    keyed("--seed", "seed", "Experiment seed (required here or in --config)");
    keyed("--horizon", "horizon", "Horizon T");
    if (audit) {
      keyed("--audit-n", "audit_n", "Grid frequency of the covariance audit");
      keyed("--pairs", "audit_pairs", "Number of audited covariance pairs");
      keyed("--ks-n", "ks_n", "Grid frequency of the dense-reference comparison");
      keyed("--ks-reps", "ks_replicates", "Replicates per sample of that comparison");
      keyed("--corrupt-hurst", "corrupt_hurst", "Generate with this H (negative control)");
    } else {
      keyed("--kind", "kind", "consistency, regime or audit (default from the name)");
      keyed("--n-grid", "n_grid", "Comma-separated increasing grid frequencies");
      keyed("--functional", "functional", "f1, f2 or zero");
      keyed("--level", "level", "Level x");
      keyed("--un-exponent", "un_exponent", "u_n = n^a");
      keyed("--refinement", "refinement", "Oracle grid factor");
      keyed("--epsilon", "epsilon", "Oracle bandwidth");
      keyed("--regime", "regime", "Regime whose checks run");
      keyed("--allow-regime-mismatch", "allow_regime_mismatch", "true to probe mismatched H");
      keyed("--lt-coefficient", "lt_coefficient", "Multiple of E|N|^3 L in the LT/BOUNDARY limit");
    }
    sub->add_option("--set", a.sets, "Any config key as key=value (repeatable)");
    sub->add_option("--out", a.out, "JSON report (default stdout)");
    sub->add_option("--csv", a.csv, "CSV summary");
    sub->add_flag("--strict", a.strict, "Exit 2 when a verdict fails");
    sub->add_flag("--timing", a.timing, "Add wall-clock seconds to the report");
  };
  auto* exp = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  add_exp(exp, ex, false);
  auto* aud = app.add_subcommand("audit", "Run the generator audit");
  add_exp(aud, au, true);

  // plot
  auto* pl = app.add_subcommand("plot", "Draw an SVG from a report or statistic CSVs");
  std::string pl_kind, pl_report, pl_out;
  std::vector<std::string> pl_stats;
  pl->add_option("--kind", pl_kind, "error-vs-n, variance-slope or path-overlay")
      ->required()
      ->check(CLI::IsMember({"error-vs-n", "variance-slope", "path-overlay"}));
  pl->add_option("--report", pl_report, "JSON report");
  pl->add_option("--stat", pl_stats, "label=file.csv statistic path (repeatable)");
  pl->add_option("--out", pl_out, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("ConfigError", e.what(), "", 1, json_errors);
  }

  try {
    const unsigned workers = resolve_threads(threads);

    if (*sim) {
      log_config(*sim);
      SamplerOptions opts;
      opts.method = sim_method == "dense" ? Generator::DenseFactorization : Generator::CirculantEmbedding;
      const FbmPath p = simulate_fbm(sim_n, HurstParameter(sim_hurst), sim_sigma, sim_horizon, sim_seed, opts);
      for (const auto& w : p.warnings) std::cerr << "warning: " << w << '\n';
      std::ofstream f;
      write_path_csv(p, open_out(sim_out, f));
      return 0;
    }

    if (*lt) {
      log_config(*lt);
      const FbmPath p = lt_path.load();
      OracleOptions o;
      o.epsilon = lt_eps;
      o.refinement = lt_ref;
      const auto est = occupation_local_time_oracle(p, lt_level, lt_time.value_or(p.horizon), o);
      json j;
      j["level"] = est.level;
      j["time"] = est.time;
      j["value"] = est.value;
      j["bandwidth"] = est.bandwidth;
      j["refinement"] = est.refinement;
      j["stability_delta"] = est.stability_delta;
      j["flagged"] = est.flagged;
      print_json(j);
      if (!lt_curve.empty()) {
        StatisticPath curve;
        curve.config.n = p.n;
        for (std::size_t i = 0; i <= p.last_index(); ++i) curve.times.push_back(p.time(i));
        const auto vals = occupation_local_time_curve(p, lt_level, curve.times, o);
        for (const double v : vals) curve.values.push_back(lt_scale * v);
        write_statistic_csv(curve, lt_curve);
      }
      return 0;
    }

    if (*vs) {
      log_config(*vs);
      const FbmPath p = vs_path.load();
      const double a = vs_un.value_or(p.hurst.value());
      StatisticPath s;
      if (!vs_kernel.empty()) {
        s = v_statistic_univariate(p, kernel_by_name(vs_kernel), a, vs_level);
      } else {
        s = v_statistic_bivariate(p, functional_by_name(vs_functional.empty() ? "f1" : vs_functional),
                                  a, vs_level);
      }
      for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
      json j;
      j["functional"] = s.config.functional;
      j["un_exponent"] = a;
      j["level"] = vs_level;
      j["n"] = p.n;
      j["scale"] = s.scale;
      j["value_at_horizon"] = s.at(p.horizon);
      if (s.config.functional == "f1") j["sign_changes"] = count_sign_changes(p, vs_level, p.horizon);
      print_json(j);
      if (!vs_out.empty()) write_statistic_csv(s, vs_out);
      return 0;
    }

    if (*qv) {
      log_config(*qv);
      const FbmPath p = qv_path.load();
      const double center = qv_center.value_or(p.sigma);
      const auto stat = centered_quadvar_abs(p, center);
      const RegimeLimit lim = qv_regime == "auto" ? regime_limit(p.hurst)
                                                  : regime_limit(parse_regime(qv_regime), p.hurst);
      const auto scaled = scaled_statistic(stat, lim);
      const auto res = crossing_decomposition_check(p, center);
      for (const auto& w : scaled.warnings) std::cerr << "warning: " << w << '\n';
      json j;
      j["regime"] = std::string(regime_name(lim.regime));
      j["scaling_exponent"] = lim.scaling_exponent;
      j["limit"] = lim.limit_descriptor;
      j["S_n_at_horizon"] = stat.at(p.horizon);
      j["scaled_at_horizon"] = scaled.at(p.horizon);
      j["decomposition"] = {{"pointwise_residual", res.pointwise},
                            {"aggregate_residual", res.aggregate},
                            {"path_scale", res.scale}};
      print_json(j);
      if (!qv_out.empty()) write_statistic_csv(scaled, qv_out);
      return 0;
    }

    if (*cs) {
      log_config(*cs);
      QuadratureConfig q;
      q.hermite_degree = cs_degree;
      const auto c = limit_constant(functional_by_name(cs_f), cs_sigma, q);
      std::printf("%.12g\n", c.value);
      if (c.closed_form)
        std::fprintf(stderr, "closed form %.12g, gap %.3g\n", *c.closed_form, *c.closed_form_gap);
      std::fprintf(stderr, "half-degree value %.12g, truncation |y| <= %g\n", c.coarse_value,
                   c.truncation);
      return 0;
    }

    if (*exp || *aud) {
      CLI::App& sub = *exp ? *exp : *aud;
      ExpArgs& a = *exp ? ex : au;
      ExperimentConfig config = a.config_file.empty() ? ExperimentConfig{}
                                                      : load_experiment_config(a.config_file);
      if (*aud) {
        config.kind = ExperimentKind::Audit;
        if (a.config_file.empty()) config.name = "audit";
      }
      for (std::size_t i = 0; i < a.keyed.size(); ++i)
        if (a.keyed[i].second->count() > 0) config.set(a.keyed[i].first, a.values[i]);
      for (const auto& kv : a.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        config.set(kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (!config.seed) throw ConfigError("an experiment needs --seed (or seed in --config)");
      config.validate();
      log_config(sub);
      std::cerr << "# experiment configuration\n";
      for (const auto& [k, v] : config.entries()) std::cerr << k << " = " << v << '\n';
      std::cerr << "# threads = " << workers << '\n';

      const auto t0 = std::chrono::steady_clock::now();
      RunOptions run;
      run.threads = workers;
      ExperimentReport rep = run_experiment(config, run);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::cerr << "# wall-clock " << secs << " s\n";
      if (a.timing) rep.runtime.wall_seconds = secs;

      std::ofstream f;
      open_out(a.out, f) << rep.to_json();
      if (!a.csv.empty()) {
        std::ofstream c(a.csv);
        if (!c) throw ConfigError("cannot open '" + a.csv + "' for writing");
        rep.write_csv(c);
      }
      for (const auto& v : rep.verdicts)
        std::cerr << (v.passed ? "PASS " : "FAIL ") << v.rule << ": " << v.effect_name << " = "
                  << v.effect << " [" << v.ci_low << ", " << v.ci_high << "] " << v.detail << '\n';
      if (a.strict && !rep.all_passed())
        return report_error("VerdictFailure", "at least one verdict failed", "", 2, json_errors);
      return 0;
    }

    if (*pl) {
      log_config(*pl);
      PlotSpec spec;
      if (pl_kind == "path-overlay") {
        if (pl_stats.empty()) throw ConfigError("path-overlay needs --stat label=file.csv");
        std::vector<std::pair<std::string, StatisticPath>> paths;
        for (const auto& s : pl_stats) {
          const auto eq = s.find('=');
          const std::string label = eq == std::string::npos ? s : s.substr(0, eq);
          const std::string file = eq == std::string::npos ? s : s.substr(eq + 1);
          paths.emplace_back(label, read_statistic_csv(file));
        }
        spec = path_overlay_plot(paths);
      } else {
        if (pl_report.empty()) throw ConfigError(pl_kind + " needs --report");
        const std::string text = read_file(pl_report);
        spec = pl_kind == "error-vs-n" ? error_vs_n_plot(text) : variance_slope_plot(text);
      }
      std::ofstream f(pl_out);
      if (!f) throw ConfigError("cannot open '" + pl_out + "' for writing");
      f << render_svg(spec);
      return 0;
    }
  } catch (const AlgebraViolation& e) {
    return report_error("AlgebraViolation", e.what(), e.diagnostics(), 2, json_errors);
  } catch (const NumericalError& e) {
    return report_error("NumericalError", e.what(), e.diagnostics(), 2, json_errors);
  } catch (const ResourceError& e) {
    return report_error("ResourceError", e.what(), "", 2, json_errors);
  } catch (const UnsupportedRegimeError& e) {
    return report_error("UnsupportedRegimeError", e.what(), "", 1, json_errors);
  } catch (const DomainError& e) {
    return report_error("DomainError", e.what(), "", 1, json_errors);
  } catch (const ConfigError& e) {
    return report_error("ConfigError", e.what(), "", 1, json_errors);
  } catch (const std::exception& e) {
    return report_error("InternalError", e.what(), "", 2, json_errors);
  }
  return 0;
}
