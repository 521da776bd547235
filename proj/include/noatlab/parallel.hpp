#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>

namespace noatlab {

/// SplitMix64 finalizer. Used to derive independent substream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed for substream `stream` of a run seeded with `seed`. Chained calls
/// give a tree of streams, e.g. derive_seed(derive_seed(s, block), copy).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// Runs task(i) for i in [0, n_tasks) on up to `workers` threads.
///
/// Tasks are claimed dynamically, so callers that need reproducible output
/// must make every task's result depend only on its index and reduce the
/// results in index order afterwards. The first exception thrown by any
/// task is rethrown on the calling thread after all workers have joined.
void parallel_for(std::size_t n_tasks, int workers,
                  const std::function<void(std::size_t)>& task);

/// Number of workers to use when the caller passes 0.
int default_workers();

}  // namespace noatlab
