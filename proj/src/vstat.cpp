#include "fraclt/vstat.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fraclt/errors.hpp"
#include "fraclt/summation.hpp"

namespace fraclt {
namespace {

StatisticPath finish(const FbmPath& path, std::vector<double> terms, double un_exponent,
                     double x, std::string name) {
  StatisticPath out;
  const double n = static_cast<double>(path.n);
  const double un = std::pow(n, un_exponent);
  out.scale = un / n;
  out.raw = prefix_sums(terms);
  out.times.resize(out.raw.size());
  out.values.resize(out.raw.size());
  for (std::size_t i = 0; i < out.raw.size(); ++i) {
    out.times[i] = path.time(i);
    out.values[i] = out.scale * out.raw[i];
  }
  out.config = {std::move(name), un_exponent, x, path.n, path.hurst.value(), path.sigma};
  if (!(un_exponent > 0.0 && un_exponent < 1.0))
    out.warnings.push_back("u_n exponent outside (0,1): u_n/n does not tend to 0");
  return out;
}

void check_path(const FbmPath& path) {
  if (path.values.size() < 2) throw DomainError("statistic: path needs at least two points");
}

}  // namespace

double StatisticPath::at(double t) const {
  if (config.n == 0 || values.empty()) throw DomainError("StatisticPath::at: empty statistic");
  const std::uint64_t i = grid_index(config.n, t);
  if (t < 0.0 || i >= values.size()) throw DomainError("StatisticPath::at: t outside the grid");
  return values[i];
}

StatisticPath v_statistic_univariate(const FbmPath& path, const KernelG& g, double un_exponent,
                                     double x) {
  check_path(path);
  const double un = std::pow(static_cast<double>(path.n), un_exponent);
  const std::size_t last = path.last_index();
  // terms[i] is the i-th summand; the sum starts at i = 1.
  std::vector<double> terms(last + 1, 0.0);
  for (std::size_t i = 1; i <= last; ++i) terms[i] = g.eval(un * (path.values[i] - x));
  return finish(path, std::move(terms), un_exponent, x, g.name);
}

StatisticPath v_statistic_bivariate(const FbmPath& path, const BivariateF& f, double un_exponent,
                                    double x) {
  check_path(path);
  const double un = std::pow(static_cast<double>(path.n), un_exponent);
  const std::size_t last = path.last_index();
  std::vector<double> terms(last + 1);
  for (std::size_t i = 0; i <= last; ++i) {
    const double y = un * (path.values[i] - x);
    const double z = un * (path.values[i + 1] - path.values[i]);
    terms[i] = f.eval(y, z);
  }
  return finish(path, std::move(terms), un_exponent, x, f.name);
}

std::uint64_t count_sign_changes(const FbmPath& path, double x, double t) {
  const std::uint64_t end = grid_index(path.n, t);
  if (t < 0.0 || end > path.last_index()) throw DomainError("count_sign_changes: t outside the path");
  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i <= end; ++i)
    if ((path.values[i] - x) * (path.values[i + 1] - x) < 0.0) ++count;
  return count;
}

void write_statistic_csv(const StatisticPath& s, std::ostream& out) {
  out << "t,value\n";
  char buf[64];
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s.times[i], s.values[i]);
    out << buf;
  }
}

void write_statistic_csv(const StatisticPath& s, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw ConfigError("cannot open '" + file + "' for writing");
  write_statistic_csv(s, out);
}

StatisticPath read_statistic_csv(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open '" + file + "'");
  std::string line;
  if (!std::getline(in, line) || line != "t,value")
    throw ConfigError("'" + file + "': expected header 't,value'");
  StatisticPath s;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    double t = 0.0;
    double v = 0.0;
    const char* b = line.data();
    const auto r1 = std::from_chars(b, b + (comma == std::string::npos ? line.size() : comma), t);
    const auto r2 = comma == std::string::npos
                        ? std::from_chars_result{b, std::errc::invalid_argument}
                        : std::from_chars(b + comma + 1, b + line.size(), v);
    if (r1.ec != std::errc{} || r2.ec != std::errc{})
      throw ConfigError("'" + file + "': malformed row " + std::to_string(row));
    s.times.push_back(t);
    s.values.push_back(v);
  }
  s.raw = s.values;
  if (s.times.size() >= 2 && s.times[1] > 0.0)
    s.config.n = static_cast<std::uint64_t>(std::llround(1.0 / s.times[1]));
  return s;
}

}  // namespace fraclt
