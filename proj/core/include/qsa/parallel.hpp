#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace qsa {

/// Worker count: explicit override > QSA_THREADS env > hardware concurrency.
int worker_count();

/// Override the worker count in-process (0 = back to env/hardware default).
void set_worker_override(int workers);

/// Runs fn(begin, end) over fixed-size blocks of [0, n). The block grid is
/// independent of the worker count, so indexed writes are reproducible.
void parallel_for_blocks(std::size_t n, std::size_t block,
                         const std::function<void(std::size_t, std::size_t)>& fn);

/// Deterministic parallel sum: per-block Kahan partials combined in block order.
/// The result is bit-identical for any worker count.
double block_sum(std::size_t n, const std::function<double(std::size_t)>& term);

} // namespace qsa
