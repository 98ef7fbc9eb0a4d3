#include "fraclt/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fraclt/errors.hpp"

namespace fraclt {
namespace {

using json = nlohmann::json;

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 180.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

json parse_report(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
  if (!j.is_object() || !j.contains("per_n") || !j["per_n"].is_array())
    throw ConfigError("malformed report: missing per_n");
  return j;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  std::size_t points = 0;
  const auto tx = [&](double v) { return spec.logx ? std::log10(v) : v; };
  const auto ty = [&](double v) { return spec.logy ? std::log10(v) : v; };
  for (const auto& s : spec.series) {
    if (s.x.size() != s.y.size()) throw ConfigError("plot: series '" + s.label + "' has x/y mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if ((spec.logx && s.x[i] <= 0.0) || (spec.logy && s.y[i] <= 0.0))
        throw ConfigError("plot: non-positive value on a log axis in '" + s.label + "'");
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
      ++points;
    }
  }
  if (points == 0) throw ConfigError("plot: nothing to draw");
  if (x1 == x0) { x0 -= 0.5; x1 += 0.5; }
  if (y1 == y0) { y0 -= 0.5; y1 += 0.5; }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double v) { return kLeft + (tx(v) - x0) / (x1 - x0) * pw; };
  const auto py = [&](double v) { return kTop + ph - (ty(v) - y0) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << escape(spec.title) << "</text>\n"
    << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Ticks: five evenly spaced positions in the transformed coordinates.
  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4.0;
    const double fy = y0 + (y1 - y0) * k / 4.0;
    const double vx = spec.logx ? std::pow(10.0, fx) : fx;
    const double vy = spec.logy ? std::pow(10.0, fy) : fy;
    const double sx = kLeft + pw * k / 4.0;
    const double sy = kTop + ph - ph * k / 4.0;
    o << "<line x1=\"" << sx << "\" y1=\"" << kTop + ph << "\" x2=\"" << sx << "\" y2=\""
      << kTop + ph + 5 << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << sx << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << fmt(vx)
      << "</text>\n"
      << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << sy << "\" x2=\"" << kLeft << "\" y2=\"" << sy
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << kLeft - 8 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">" << fmt(vy)
      << "</text>\n";
  }
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
    << escape(spec.xlabel) << (spec.logx ? " (log)" : "") << "</text>\n"
    << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(spec.ylabel) << (spec.logy ? " (log)" : "") << "</text>\n";

  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const auto& ser = spec.series[s];
    const char* color = kColors[s % std::size(kColors)];
    std::ostringstream pts;
    for (std::size_t i = 0; i < ser.x.size(); ++i) {
      if (!std::isfinite(ser.x[i]) || !std::isfinite(ser.y[i])) continue;
      pts << fmt(px(ser.x[i])) << ',' << fmt(py(ser.y[i])) << ' ';
    }
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
      << (ser.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"" << pts.str() << "\"/>\n";
    if (ser.markers)
      for (std::size_t i = 0; i < ser.x.size(); ++i)
        if (std::isfinite(ser.x[i]) && std::isfinite(ser.y[i]))
          o << "<circle cx=\"" << fmt(px(ser.x[i])) << "\" cy=\"" << fmt(py(ser.y[i]))
            << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
    const double ly = kTop + 16.0 + 18.0 * static_cast<double>(s);
    o << "<line x1=\"" << kWidth - kRight + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
      << kWidth - kRight + 36 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << kWidth - kRight + 42 << "\" y=\"" << ly << "\">" << escape(ser.label)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

PlotSpec error_vs_n_plot(const std::string& report_json) {
  const json j = parse_report(report_json);
  if (j["per_n"].empty()) throw ConfigError("report has no per-n results");
  PlotSpec spec;
  spec.logx = spec.logy = true;
  spec.xlabel = "n";
  const std::string kind = j.contains("config") ? j["config"].value("kind", "") : "";
  std::vector<std::pair<std::string, std::string>> keys;
  if (kind == "consistency") {
    spec.title = "median error against n";
    spec.ylabel = "error";
    keys = {{"abs_error_median", "median |V - c L|"}, {"sup_error_median", "median sup over t"}};
  } else if (kind == "regime") {
    spec.title = "scaled statistic variance against n";
    spec.ylabel = "variance";
    keys = {{"scaled_variance", "Var scaled S_n"}, {"raw_variance", "Var S_n"}};
  } else {
    throw ConfigError("error-vs-n needs a consistency or regime report");
  }
  for (const auto& [key, label] : keys) {
    Series s;
    s.label = label;
    s.markers = true;
    for (const auto& row : j["per_n"]) {
      if (!row.contains(key) || !row[key].is_number()) continue;
      s.x.push_back(row["n"].get<double>());
      s.y.push_back(row[key].get<double>());
    }
    if (!s.x.empty()) spec.series.push_back(std::move(s));
  }
  if (spec.series.empty()) throw ConfigError("report has no plottable per-n metrics");
  return spec;
}

PlotSpec variance_slope_plot(const std::string& report_json) {
  const json j = parse_report(report_json);
  if (!j.contains("regressions") || !j["regressions"].is_array() || j["regressions"].empty())
    throw ConfigError("report has no regressions");
  PlotSpec spec;
  spec.title = "log-log regressions";
  spec.xlabel = "log x";
  spec.ylabel = "log y";
  for (const auto& r : j["regressions"]) {
    Series pts;
    pts.label = r.value("name", "regression");
    pts.markers = true;
    pts.x = r["x"].get<std::vector<double>>();
    pts.y = r["y"].get<std::vector<double>>();
    Series fit;
    std::ostringstream l;
    l << "slope " << fmt(r.value("slope", 0.0));
    if (r.contains("target") && r["target"].is_number()) l << " (target " << fmt(r["target"].get<double>()) << ")";
    fit.label = l.str();
    fit.dashed = true;
    const double a = r.value("intercept", 0.0), b = r.value("slope", 0.0);
    if (!pts.x.empty()) {
      const auto [lo, hi] = std::minmax_element(pts.x.begin(), pts.x.end());
      fit.x = {*lo, *hi};
      fit.y = {a + b * *lo, a + b * *hi};
    }
    spec.series.push_back(std::move(pts));
    spec.series.push_back(std::move(fit));
  }
  return spec;
}

PlotSpec path_overlay_plot(const std::vector<std::pair<std::string, StatisticPath>>& paths) {
  if (paths.empty()) throw ConfigError("path overlay needs at least one statistic path");
  PlotSpec spec;
  spec.title = "statistic paths";
  spec.xlabel = "t";
  spec.ylabel = "value";
  for (const auto& [label, p] : paths) {
    if (p.values.empty()) throw ConfigError("statistic path '" + label + "' is empty");
    Series s;
    s.label = label;
    s.x = p.times;
    s.y = p.values;
    spec.series.push_back(std::move(s));
  }
  return spec;
}

}  // namespace fraclt
