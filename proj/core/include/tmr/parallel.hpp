#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace tmr {

/// Worker count used by parallel_for. Defaults to $TMR_THREADS when set,
/// otherwise std::thread::hardware_concurrency().
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs body(i) for i in [0, n). Work is split into contiguous blocks, so
/// callers writing results by index get identical output for any thread
/// count. The exception raised for the lowest index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tmr
