#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace mbdp {

// Name of the environment variable holding the default worker count.
inline constexpr const char* kThreadsEnv = "MBDP_THREADS";

// 0 means: the environment variable if set, else the hardware concurrency.
std::size_t resolve_threads(std::size_t requested);

// Splits [0, n) into at most `workers` contiguous chunks and runs
// body(begin, end, chunk) on each, one thread per chunk. The chunking depends
// only on n and workers. The first exception thrown by a chunk is rethrown.
template <class Body>
void parallel_chunks(std::size_t n, std::size_t workers, Body&& body) {
    if (workers <= 1 || n < 2) {
        if (n > 0) body(std::size_t{0}, n, std::size_t{0});
        return;
    }
    const std::size_t chunks = workers < n ? workers : n;
    std::vector<std::exception_ptr> errors(chunks);
    std::vector<std::thread> pool;
    pool.reserve(chunks - 1);
    auto run = [&](std::size_t c) {
        const std::size_t begin = n * c / chunks, end = n * (c + 1) / chunks;
        try {
            body(begin, end, c);
        } catch (...) {
            errors[c] = std::current_exception();
        }
    };
    for (std::size_t c = 1; c < chunks; ++c) pool.emplace_back(run, c);
    run(0);
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace mbdp
