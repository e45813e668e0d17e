#pragma once

#include <cstddef>
#include <functional>

namespace metastab {

// METASTAB_THREADS if set to a positive integer, else the hardware concurrency.
int thread_count();

// Runs body(i) for i in [0, n). Each index must write only its own output slot, so results do not
// depend on scheduling. The exception from the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads = 0);

}  // namespace metastab
