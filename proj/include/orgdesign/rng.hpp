#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace orgdesign {

using Rng = std::mt19937_64;

inline constexpr std::string_view kGeneratorName = "mt19937_64";

// Independent random streams within one replication. Each mechanism draws
// from its own stream so that switching one mechanism off leaves the
// others' draws untouched.
enum class StreamRole : std::uint64_t {
  kLandscape = 1,
  kAllocation = 2,
  kInitialConfiguration = 3,
  kHillclimb = 4,
  kBidNoise = 5,
  kTieBreak = 6,
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Seed of cell `cell` in a grid run from `master`. Cell 0 keeps the master
// seed; the odd multiplier makes the map injective.
std::uint64_t cell_seed(std::uint64_t master, std::uint64_t cell);

// Seed of replication `replication` within an experiment.
std::uint64_t replication_seed(std::uint64_t experiment_seed, std::uint64_t replication);

Rng make_stream(std::uint64_t replication_seed, StreamRole role);

// Uniform on [0,1) with 53 random bits.
double uniform01(Rng& rng);

// Uniform on {0, ..., count - 1}; count must be positive.
std::size_t uniform_index(Rng& rng, std::size_t count);

}  // namespace orgdesign
