#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace nlft {

// Evaluates task(i) for i in [0, count) and returns the results in index
// order.  Tasks must be pure functions of their index: results are then
// bit-identical for any worker count, since each slot is written exactly once
// by whichever worker drew that index.  A task that throws is retried once in
// place; if it throws again the sweep finishes draining and rethrows the
// failure with the smallest index.
template <typename T>
std::vector<T> parallel_sweep(std::size_t count, int workers,
                              const std::function<T(std::size_t)>& task) {
    std::vector<T> results(count);
    if (count == 0) return results;

    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};

    auto drain = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            try {
                results[i] = task(i);
            } catch (...) {
                try {
                    results[i] = task(i);  // single retry
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        }
    };

    if (workers <= 1) {
        drain();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < count; ++i)
        if (errors[i]) std::rethrow_exception(errors[i]);
    return results;
}

}  // namespace nlft
