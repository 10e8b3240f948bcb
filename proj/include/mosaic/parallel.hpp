#pragma once

// Deterministic index-parallel map: results land in slot order regardless of
// the worker count, so outputs are byte-identical for any --threads value.

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace mosaic {

template <class Result, class Fn>
std::vector<Result> parallel_map(size_t count, int n_threads, Fn&& fn) {
    std::vector<Result> results(count);
    if (n_threads <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= count) return;
            results[i] = fn(i);
        }
    };
    std::vector<std::thread> pool;
    int n = std::min<int>(n_threads, static_cast<int>(count));
    pool.reserve(static_cast<size_t>(n));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return results;
}

} // namespace mosaic
