#pragma once

// Index-ordered maps over ladders and grids. The OpenMP version must return
// exactly what the serial one does; both rethrow the lowest-index exception.

#include <cstddef>
#include <exception>
#include <vector>

namespace hardylab::parallel {

template <class T, class F>
std::vector<T> serial_map(std::size_t count, F&& f) {
    std::vector<T> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(f(i));
    return out;
}

template <class T, class F>
std::vector<T> omp_map(std::size_t count, F&& f) {
    std::vector<T> out(count);
    std::vector<std::exception_ptr> errors(count);
    const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
        try {
            out[i] = f(static_cast<std::size_t>(i));
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace hardylab::parallel
