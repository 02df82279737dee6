#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace bellman {

/// Worker count: BELLMAN_THREADS if set and positive, else hardware concurrency.
unsigned default_threads();

/// Runs body(i) for i in [0, n) on up to `threads` workers with static
/// contiguous chunks. Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

/// Independent generator for sample `index` under `seed`, so results do not
/// depend on how samples are distributed over workers.
std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index);

}  // namespace bellman
