#ifndef STOKESWALL_PARALLEL_HPP_
#define STOKESWALL_PARALLEL_HPP_

#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>

namespace stokeswall {

/// Runs body(i) for i in [0, n), in parallel when OpenMP is enabled. Each index
/// is handled by exactly one thread, so per-index results do not depend on the
/// thread count. The exception from the lowest failing index is rethrown.
template <typename Body>
void for_each_index(std::size_t n, Body &&body) {
    std::exception_ptr first_error;
    std::int64_t first_index = -1;
    std::mutex guard;
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(guard);
            if (first_index < 0 || i < first_index) {
                first_index = i;
                first_error = std::current_exception();
            }
        }
    }
    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace stokeswall

#endif
