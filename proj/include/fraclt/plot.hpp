#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fraclt/vstat.hpp"

namespace fraclt {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;
  bool dashed = false;
};

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool logx = false;
  bool logy = false;
  std::vector<Series> series;
};

/// Self-contained SVG document. Throws ConfigError if there is nothing to draw
/// or a log axis meets a non-positive value.
std::string render_svg(const PlotSpec& spec);

/// Median absolute error (consistency) or scaled-statistic variance (regime)
/// against n, log-log, from a JSON experiment report.
PlotSpec error_vs_n_plot(const std::string& report_json);
/// Every regression stored in a report: points and fitted line.
PlotSpec variance_slope_plot(const std::string& report_json);
/// Statistic paths over t, e.g. V(f1) against c times the oracle local time.
PlotSpec path_overlay_plot(const std::vector<std::pair<std::string, StatisticPath>>& paths);

}  // namespace fraclt
