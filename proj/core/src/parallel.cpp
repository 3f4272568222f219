#include "qsa/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace qsa {

namespace {
std::atomic<int> g_override{0};
} // namespace

int worker_count() {
    const int ov = g_override.load(std::memory_order_relaxed);
    if (ov > 0) return ov;
    if (const char* env = std::getenv("QSA_THREADS")) {
        const int k = std::atoi(env);
        if (k >= 1) return k;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? int(hw) : 1;
}

void set_worker_override(int workers) {
    g_override.store(workers, std::memory_order_relaxed);
}

void parallel_for_blocks(std::size_t n, std::size_t block,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (block == 0) block = 1;
    const std::size_t n_blocks = (n + block - 1) / block;
    const int workers = std::min<std::size_t>(worker_count(), n_blocks);
    if (workers <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b)
            fn(b * block, std::min(n, (b + 1) * block));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= n_blocks) return;
            fn(b * block, std::min(n, (b + 1) * block));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int i = 1; i < workers; ++i) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
}

double block_sum(std::size_t n, const std::function<double(std::size_t)>& term) {
    constexpr std::size_t kBlock = 4096;
    const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(n_blocks, 0.0);
    parallel_for_blocks(n, kBlock, [&](std::size_t lo, std::size_t hi) {
        double s = 0.0, c = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double y = term(i) - c;
            const double t = s + y;
            c = (t - s) - y;
            s = t;
        }
        partial[lo / kBlock] = s;
    });
    double s = 0.0, c = 0.0;
    for (const double p : partial) {
        const double y = p - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

} // namespace qsa
