#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>

namespace lrdcp {

/// Identifies one independent random stream: a master seed plus a replicate index.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t replicate_index = 0;
};

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Folds a list of integer tags into `master` so that distinct tag tuples give
/// statistically independent seeds. Pure function.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) noexcept;

/// The generator for a SeedSpec; depends only on (master_seed, replicate_index).
Rng make_rng(const SeedSpec& seed);

/// Quantizes a real parameter (H, tau, ...) to a stable integer tag.
std::uint64_t real_tag(double value) noexcept;

/// Number of worker threads used by parallel_for; 0 means hardware concurrency.
void set_thread_limit(unsigned threads) noexcept;
unsigned thread_limit() noexcept;

/// Runs body(i) for i in [0, count). Work is split into contiguous blocks, so
/// any body that writes only to slot i gives results independent of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace lrdcp
