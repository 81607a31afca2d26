#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace mbm {

inline unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Split [0, total) into one contiguous range per worker and run
/// fn(worker_index, begin, end) on each. Worker 0 runs on the calling thread.
/// Merging per-worker results in worker-index order keeps outputs independent
/// of thread scheduling.
template <typename Fn>
void parallel_ranges(std::uint64_t total, unsigned workers, Fn&& fn) {
    workers = std::max(1u, workers);
    if (workers == 1 || total < 2 * workers) {
        fn(0u, std::uint64_t{0}, total);
        return;
    }
    const std::uint64_t chunk = (total + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) {
        const std::uint64_t b = std::min<std::uint64_t>(total, w * chunk);
        const std::uint64_t e = std::min<std::uint64_t>(total, b + chunk);
        if (b >= e) continue;
        pool.emplace_back([&fn, w, b, e] { fn(w, b, e); });
    }
    fn(0u, std::uint64_t{0}, std::min<std::uint64_t>(total, chunk));
    for (auto& t : pool) t.join();
}

/// Kahan compensated accumulator; keeps pair sums reproducible to ~1e-15
/// relative regardless of how the pair space is partitioned.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    void merge(const KahanSum& other) {
        add(other.sum);
        add(-other.carry);
    }
    double value() const { return sum; }
};

} // namespace mbm
