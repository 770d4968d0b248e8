#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace kfwer {

/// Worker count: KFWER_THREADS if set and positive, else hardware concurrency.
unsigned default_threads();

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 means
/// default_threads()). Indices are statically partitioned; callers write
/// results into per-index slots so output never depends on scheduling.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

using Engine = std::mt19937_64;

/// SplitMix64 finalizer over (seed, stream): independent substream seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

inline Engine make_engine(std::uint64_t seed, std::uint64_t stream) {
  return Engine(derive_seed(seed, stream));
}

}  // namespace kfwer
