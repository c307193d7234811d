#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

namespace ruinlab::parallel {

inline int default_workers() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(batch_index, begin, end, acc) over fixed-size batches of
// [0, n_items). Batch boundaries depend only on batch_size, so accumulators —
// returned indexed by batch — merge to the same result for any worker count.
template <typename Acc, typename Fn>
std::vector<Acc> parallel_batches(std::int64_t n_items, std::int64_t batch_size,
                                  int workers, Fn&& fn) {
    if (n_items < 0 || batch_size <= 0)
        throw std::invalid_argument("parallel_batches: bad sizes");
    const std::int64_t n_batches = (n_items + batch_size - 1) / batch_size;
    std::vector<Acc> accs(static_cast<std::size_t>(n_batches));
    if (n_batches == 0) return accs;
    if (workers <= 0) workers = default_workers();
    if (workers > n_batches) workers = static_cast<int>(n_batches);

    std::atomic<std::int64_t> next{0};
    std::exception_ptr err;
    std::atomic<bool> failed{false};

    auto body = [&] {
        for (;;) {
            const std::int64_t b = next.fetch_add(1);
            if (b >= n_batches || failed.load()) return;
            const std::int64_t begin = b * batch_size;
            const std::int64_t end = std::min(n_items, begin + batch_size);
            try {
                fn(b, begin, end, accs[static_cast<std::size_t>(b)]);
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
                return;
            }
        }
    };

    if (workers == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) std::rethrow_exception(err);
    return accs;
}

} // namespace ruinlab::parallel
