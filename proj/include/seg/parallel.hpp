#pragma once

#include <cstddef>
#include <functional>

namespace seg {

// Worker cap shared by every parallel loop; defaults to the hardware concurrency.
void set_thread_count(int count);
int thread_count();

// Splits [begin, end) into contiguous chunks, one per worker. Chunks must be
// independent; results never depend on the worker count.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t lo, std::size_t hi)>& body);

}  // namespace seg
