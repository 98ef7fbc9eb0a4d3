#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace fraclt {

/// Worker count: the explicit request if given, else FRACLT_THREADS, else the
/// number of logical cores. Throws ConfigError on a non-positive request or
/// a malformed environment value.
unsigned resolve_threads(std::optional<long> requested = std::nullopt);

/// Runs body(i) for i in [0, count) on `threads` workers pulling indices from
/// a shared counter. Each index must write only its own output slot. If any
/// body throws, the exception of the lowest failing index is rethrown after
/// all workers stop, so failures do not depend on scheduling either.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace fraclt
