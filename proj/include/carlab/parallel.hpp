#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace carlab {

/// Run fn(block) for block = 0..nblocks-1 on up to nthreads threads. Blocks
/// are claimed through an atomic counter; fn must only touch block-local
/// state, so results cannot depend on the schedule. The first exception is
/// rethrown in the caller.
inline void parallel_blocks(int nblocks, int nthreads, const std::function<void(int)>& fn) {
    if (nthreads <= 1 || nblocks <= 1) {
        for (int b = 0; b < nblocks; ++b) fn(b);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        try {
            for (int b = next.fetch_add(1); b < nblocks; b = next.fetch_add(1)) {
                if (failed.load(std::memory_order_relaxed)) return;
                fn(b);
            }
        } catch (...) {
            if (!failed.exchange(true)) error = std::current_exception();
        }
    };
    const int nt = std::min(nthreads, nblocks);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nt) - 1);
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failed.load()) std::rethrow_exception(error);
}

} // namespace carlab
