#include "fraclt/fbm.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fraclt/covariance.hpp"
#include "fraclt/errors.hpp"

namespace fraclt {

std::string_view origin_name(PathOrigin o) {
  switch (o) {
    case PathOrigin::CirculantEmbedding: return "circulant";
    case PathOrigin::DenseFactorization: return "dense";
    case PathOrigin::Injected: return "injected";
    case PathOrigin::Imported: return "imported";
  }
  return "?";
}

std::uint64_t grid_index(std::uint64_t n, double t) {
  if (!(t >= 0.0)) throw DomainError("grid_index: negative time");
  return static_cast<std::uint64_t>(std::floor(static_cast<double>(n) * t + 1e-9));
}

FbmPath FbmPath::injected(std::vector<double> values, std::uint64_t n, double horizon,
                          HurstParameter hurst, double sigma) {
  if (n == 0) throw DomainError("FbmPath: n must be positive");
  if (!(horizon > 0.0)) throw DomainError("FbmPath: horizon must be positive");
  const std::size_t expected = grid_index(n, horizon) + 2;
  if (values.size() != expected) {
    std::ostringstream msg;
    msg << "FbmPath: expected [nT]+2 = " << expected << " values, got " << values.size();
    throw DomainError(msg.str());
  }
  FbmPath p;
  p.hurst = hurst;
  p.sigma = sigma;
  p.n = n;
  p.horizon = horizon;
  p.origin = PathOrigin::Injected;
  p.values = std::move(values);
  return p;
}

namespace {

std::size_t increment_count(std::uint64_t n, double horizon) {
  return grid_index(n, horizon) + 1;
}

}  // namespace

FbmSampler::FbmSampler(std::uint64_t n, HurstParameter hurst, double sigma, double horizon,
                       SamplerOptions options)
    : n_(n),
      hurst_(hurst),
      sigma_(sigma),
      horizon_(horizon),
      increments_(
          [hurst](std::size_t k) { return increment_autocovariance(k, hurst); },
          (n >= 2 && horizon > 0.0) ? increment_count(n, horizon) : 1, options),
      scale_(sigma * std::pow(static_cast<double>(n), -hurst.value())) {
  if (n < 2) throw DomainError("simulate_fbm: n must be >= 2");
  if (!(sigma > 0.0)) throw DomainError("simulate_fbm: sigma must be positive");
  if (!(horizon > 0.0)) throw DomainError("simulate_fbm: horizon must be positive");
}

void FbmSampler::sample_into(std::uint64_t seed, std::vector<double>& values) const {
  const std::size_t m = increments_.size();
  values.assign(m + 1, 0.0);
  // Increments land in values[1..m], then become the running sum.
  increments_.sample(seed, std::span<double>(values.data() + 1, m));
  values[0] = 0.0;
  double level = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    level += scale_ * values[i];
    values[i] = level;
  }
}

FbmPath FbmSampler::sample(std::uint64_t seed) const {
  FbmPath p;
  p.hurst = hurst_;
  p.sigma = sigma_;
  p.n = n_;
  p.horizon = horizon_;
  p.seed = seed;
  p.origin = increments_.method() == Generator::CirculantEmbedding ? PathOrigin::CirculantEmbedding
                                                                    : PathOrigin::DenseFactorization;
  p.warnings = increments_.warnings();
  sample_into(seed, p.values);
  return p;
}

FbmPath simulate_fbm(std::uint64_t n, HurstParameter hurst, double sigma, double horizon,
                     std::uint64_t seed, SamplerOptions options) {
  return FbmSampler(n, hurst, sigma, horizon, options).sample(seed);
}

FbmPath subsample(const FbmPath& fine, std::uint64_t factor, double horizon) {
  if (factor == 0 || fine.n % factor != 0)
    throw DomainError("subsample: factor must divide the fine grid frequency");
  if (!(horizon > 0.0)) throw DomainError("subsample: horizon must be positive");
  const std::uint64_t n = fine.n / factor;
  const std::size_t points = grid_index(n, horizon) + 2;
  if ((points - 1) * factor >= fine.values.size())
    throw DomainError("subsample: fine path does not cover the coarse grid");
  FbmPath p = fine;
  p.n = n;
  p.horizon = horizon;
  p.values.resize(points);
  for (std::size_t i = 0; i < points; ++i) p.values[i] = fine.values[i * factor];
  return p;
}

namespace {

void append_double(std::string& line, double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  line.append(buf, static_cast<std::size_t>(len));
}

double parse_double(std::string_view field, std::size_t row) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ConfigError("path CSV: malformed number '" + std::string(field) + "' on row " +
                      std::to_string(row));
  return v;
}

}  // namespace

void write_path_csv(const FbmPath& path, std::ostream& out) {
  std::string line;
  out << "t,x\n";
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    line.clear();
    append_double(line, path.time(i));
    line.push_back(',');
    append_double(line, path.values[i]);
    line.push_back('\n');
    out << line;
  }
}

void write_path_csv(const FbmPath& path, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw ConfigError("cannot open '" + file + "' for writing");
  write_path_csv(path, out);
  if (!out) throw ConfigError("failed writing '" + file + "'");
}

FbmPath read_path_csv(std::istream& in, HurstParameter hurst, double sigma) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("path CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,x") throw ConfigError("path CSV: expected header 't,x', got '" + line + "'");

  std::vector<double> times;
  std::vector<double> values;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("path CSV: missing ',' on row " + std::to_string(row));
    std::string_view sv(line);
    times.push_back(parse_double(sv.substr(0, comma), row));
    values.push_back(parse_double(sv.substr(comma + 1), row));
  }
  if (values.size() < 3) throw ConfigError("path CSV: need at least 3 grid points");
  if (times[0] != 0.0) throw ConfigError("path CSV: first time must be 0");
  const double step = times[1];
  if (!(step > 0.0)) throw ConfigError("path CSV: non-increasing time column");
  const double n_real = 1.0 / step;
  const auto n = static_cast<std::uint64_t>(std::llround(n_real));
  if (n == 0 || std::abs(n_real - static_cast<double>(n)) > 1e-6 * n_real)
    throw ConfigError("path CSV: time step is not 1/n for an integer n");
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double expected = static_cast<double>(i) / static_cast<double>(n);
    if (std::abs(times[i] - expected) > 1e-9 * std::max(1.0, expected))
      throw ConfigError("path CSV: non-uniform grid at row " + std::to_string(i + 2));
  }
  const double horizon = static_cast<double>(values.size() - 2) / static_cast<double>(n);
  FbmPath p = FbmPath::injected(std::move(values), n, horizon, hurst, sigma);
  p.origin = PathOrigin::Imported;
  return p;
}

FbmPath read_path_csv(const std::string& file, HurstParameter hurst, double sigma) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open '" + file + "'");
  return read_path_csv(in, hurst, sigma);
}

}  // namespace fraclt
