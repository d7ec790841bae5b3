#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace critical_hawkes {

/// Worker-thread count used for a request: the explicit count, or the
/// hardware concurrency (at least 1) when `requested` is 0.
[[nodiscard]] unsigned resolve_thread_count(unsigned requested);

/// Evaluate worker(replica) for replica = 0 .. n_replicas-1 on up to
/// `threads` worker threads (0 = auto) and collect the results in replica
/// order.
///
/// Replicas are the only parallel unit: indices are pulled from a shared
/// counter and each result lands in its own preallocated slot, so the
/// returned vector is identical for every thread count. The result type must
/// be default constructible. If workers throw, the exception with the lowest
/// replica index is rethrown after all threads have joined.
template <typename Worker>
[[nodiscard]] auto parallel_replicas(std::size_t n_replicas, unsigned threads, Worker&& worker)
    -> std::vector<std::invoke_result_t<Worker&, std::size_t>> {
    using Result = std::invoke_result_t<Worker&, std::size_t>;
    std::vector<Result> results(n_replicas);
    if (n_replicas == 0) {
        return results;
    }
    const std::size_t n_workers =
        std::min<std::size_t>(resolve_thread_count(threads), n_replicas);
    if (n_workers <= 1) {
        for (std::size_t replica = 0; replica < n_replicas; ++replica) {
            results[replica] = worker(replica);
        }
        return results;
    }
    std::vector<std::exception_ptr> errors(n_replicas);
    std::atomic<std::size_t> next{0};
    const auto pump = [&] {
        while (true) {
            const std::size_t replica = next.fetch_add(1, std::memory_order_relaxed);
            if (replica >= n_replicas) {
                return;
            }
            try {
                results[replica] = worker(replica);
            } catch (...) {
                errors[replica] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t i = 0; i < n_workers; ++i) {
        pool.emplace_back(pump);
    }
    for (auto& thread : pool) {
        thread.join();
    }
    for (const auto& error : errors) {
        if (error) {
            std::rethrow_exception(error);
        }
    }
    return results;
}

}  // namespace critical_hawkes
