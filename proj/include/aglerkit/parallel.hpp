#pragma once

#include <cstddef>
#include <functional>

namespace aglerkit {

// Worker count: AGLERKIT_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

// Runs body(i) for i in [0, count). Each index is handled exactly once; callers
// write results into per-index slots and reduce sequentially afterwards, so the
// outcome does not depend on the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace aglerkit
