#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace bellsim {

/// Number of hardware threads, at least 1.
inline unsigned available_workers() noexcept {
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Splits [0, n) into `workers` contiguous ranges and runs fn(worker, begin,
/// end) on each, worker 0 inline. Ranges depend only on (n, workers).
template <typename Fn>
void for_each_range(std::size_t n, unsigned workers, Fn&& fn) {
    const std::size_t parts = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    if (parts == 1) {
        fn(std::size_t{0}, std::size_t{0}, n);
        return;
    }
    const std::size_t base = n / parts;
    const std::size_t extra = n % parts;
    auto begin_of = [&](std::size_t p) { return p * base + std::min(p, extra); };

    std::vector<std::exception_ptr> errors(parts);
    std::vector<std::jthread> threads;
    threads.reserve(parts - 1);
    for (std::size_t p = 1; p < parts; ++p) {
        threads.emplace_back([&, p] {
            try {
                fn(p, begin_of(p), begin_of(p + 1));
            } catch (...) {
                errors[p] = std::current_exception();
            }
        });
    }
    try {
        fn(std::size_t{0}, begin_of(0), begin_of(1));
    } catch (...) {
        errors[0] = std::current_exception();
    }
    threads.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace bellsim
