#pragma once

#include <cstddef>
#include <functional>

namespace nonspam {

/// Worker cap: NONSPAM_THREADS when set to a positive integer, otherwise the
/// hardware concurrency. Never changes numerical results, only scheduling.
std::size_t max_threads();

/// Runs body(i) for i in [0, count). Each index is handled by exactly one
/// worker; callers must write results to disjoint slots and do any reduction
/// afterwards in index order.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace nonspam
