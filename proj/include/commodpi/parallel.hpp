#pragma once

#include <cstddef>
#include <functional>

namespace commodpi {

/// Upper bound on worker threads for Monte Carlo loops. Defaults to the
/// COMMODPI_THREADS environment variable, else the hardware concurrency.
void set_thread_count(unsigned n);
[[nodiscard]] unsigned thread_count();

/// Calls body(i) for every i in [0, n), split into contiguous blocks across
/// threads. Output must depend on i only, so results are thread-count invariant.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace commodpi
