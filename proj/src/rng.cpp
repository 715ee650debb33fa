#include "orgdesign/rng.hpp"

#include "orgdesign/errors.hpp"

namespace orgdesign {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t cell_seed(std::uint64_t master, std::uint64_t cell) {
  return master + cell * kGolden;
}

std::uint64_t replication_seed(std::uint64_t experiment_seed, std::uint64_t replication) {
  return mix64(mix64(experiment_seed) ^ mix64(replication + 1));
}

Rng make_stream(std::uint64_t replication_seed, StreamRole role) {
  return Rng(mix64(replication_seed ^ mix64(static_cast<std::uint64_t>(role) << 32)));
}

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(Rng& rng, std::size_t count) {
  if (count == 0) throw ContractViolation("uniform_index: empty range");
  std::uniform_int_distribution<std::size_t> dist(0, count - 1);
  return dist(rng);
}

}  // namespace orgdesign
