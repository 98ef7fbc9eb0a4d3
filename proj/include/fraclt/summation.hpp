#pragma once

#include <span>
#include <vector>

namespace fraclt {

/// Pairwise (tree) sum with a fixed reduction order.
double pairwise_sum(std::span<const double> terms);

/// Partial sums out[i] = terms[0] + ... + terms[i].
///
/// Each partial sum is assembled from at most log2(N) dyadic block totals of
/// a pairwise tree, largest block first, so the rounding error grows like
/// log N rather than N and the result does not depend on any scheduling.
/// out[i] never moves against the sign of terms[i], so sums of non-negative
/// terms are non-decreasing.
std::vector<double> prefix_sums(std::span<const double> terms);

}  // namespace fraclt
