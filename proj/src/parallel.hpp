#pragma once

#include <cstddef>
#include <exception>

#include "dqmotion/exec.hpp"

namespace dqm::detail {

// Runs body(i) for i in [0, n). The parallel path keeps the first exception
// thrown by any iteration and rethrows it after the loop.
template <typename Body>
void for_each_index(std::size_t n, Exec exec, Body&& body) {
    const auto count = static_cast<std::ptrdiff_t>(n);
    if (exec == Exec::Serial) {
        for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
        return;
    }
    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(dqm_for_each_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace dqm::detail
