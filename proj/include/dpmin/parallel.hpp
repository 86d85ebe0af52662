#ifndef DPMIN_PARALLEL_HPP
#define DPMIN_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace dpmin {

// Worker count resolution: explicit request > DPMIN_WORKERS env > 1.
std::size_t resolve_workers(std::size_t requested);

// Splits [0, n) into contiguous chunks, runs `body(begin, end, chunk_index)`
// on a small thread pool, one result slot per chunk.  Results are merged by
// the caller in chunk order, so output never depends on scheduling.
template <typename Body>
void for_chunks(std::size_t n, std::size_t workers, Body&& body) {
    if (n == 0) return;
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        body(std::size_t{0}, n, std::size_t{0});
        return;
    }
    std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    std::size_t index = 0;
    for (std::size_t begin = 0; begin < n; begin += chunk, ++index) {
        std::size_t end = std::min(n, begin + chunk);
        threads.emplace_back([begin, end, index, &body] { body(begin, end, index); });
    }
    for (auto& t : threads) t.join();
}

// Map over [0, n) with an ordered reduction: per-chunk accumulators are
// folded left-to-right, so the result equals the single-threaded fold.
template <typename Acc, typename Map, typename Fold>
Acc map_reduce(std::size_t n, std::size_t workers, Acc init, Map&& map_one, Fold&& fold) {
    workers = resolve_workers(workers);
    if (n == 0) return init;
    workers = std::max<std::size_t>(1, std::min(workers, n));
    std::size_t chunk_count = workers == 1 ? 1 : workers;
    std::vector<Acc> partial(chunk_count, init);
    for_chunks(n, workers, [&](std::size_t begin, std::size_t end, std::size_t idx) {
        Acc acc = init;
        for (std::size_t i = begin; i < end; ++i) map_one(acc, i);
        partial[idx] = std::move(acc);
    });
    Acc out = init;
    for (auto& p : partial) fold(out, p);
    return out;
}

}  // namespace dpmin

#endif  // DPMIN_PARALLEL_HPP
