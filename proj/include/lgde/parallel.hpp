#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace lgde {

// Caps the worker count used by the parallel loops in this library.
// Zero restores the default (all available cores). Results never depend
// on this setting: every parallel loop writes into pre-sized per-index slots.
void set_max_threads(int n);
int max_threads();

// Runs body(i) for i in [0, n) on the OpenMP pool. An exception thrown by any
// iteration is rethrown after the loop; the lowest failing index wins.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace lgde
