#include "fraclt/summation.hpp"

#include <cstddef>

namespace fraclt {

double pairwise_sum(std::span<const double> terms) {
  const std::size_t n = terms.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

std::vector<double> prefix_sums(std::span<const double> terms) {
  const std::size_t n = terms.size();
  std::vector<double> out(n);
  if (n == 0) return out;

  // levels[l][j] = sum of terms[j*2^l .. (j+1)*2^l - 1] (complete blocks only).
  std::vector<std::vector<double>> levels;
  levels.emplace_back(terms.begin(), terms.end());
  while (levels.back().size() >= 2) {
    const auto& prev = levels.back();
    std::vector<double> next(prev.size() / 2);
    for (std::size_t j = 0; j < next.size(); ++j) next[j] = prev[2 * j] + prev[2 * j + 1];
    levels.push_back(std::move(next));
  }

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t count = i + 1;
    double acc = 0.0;
    std::size_t pos = 0;
    for (std::size_t l = levels.size(); l-- > 0;) {
      const std::size_t block = std::size_t{1} << l;
      if (count & block) {
        acc += levels[l][pos >> l];
        pos += block;
      }
    }
    // A different block split can land one ulp on the wrong side of the
    // previous sum; the exact sums move in the direction of the term.
    if (i > 0) {
      if (terms[i] >= 0.0 && acc < out[i - 1]) acc = out[i - 1];
      if (terms[i] <= 0.0 && acc > out[i - 1]) acc = out[i - 1];
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace fraclt
