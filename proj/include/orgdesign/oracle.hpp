#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "orgdesign/landscape.hpp"
#include "orgdesign/learning.hpp"

// Brute-force reference computations. Reads only the interaction matrix and
// the raw contribution tables of a landscape and evaluates everything by
// direct enumeration, without the engine's evaluation paths.
namespace orgdesign::oracle {

inline constexpr std::size_t kMaxOracleDecisions = 4;
inline constexpr std::size_t kMaxBruteForceDecisions = 20;

// Decision j depends on (j+1), ..., (j+k) mod n.
InteractionMatrix cyclic_matrix(std::size_t n, std::size_t k);

// Contribution of decision j in `config` (bit i of config = d_i).
double contribution(const Landscape& landscape, std::uint32_t config, std::size_t j);

// Mean contribution over the decisions set in `subset`, ascending.
double performance(const Landscape& landscape, std::uint32_t config, std::uint32_t subset);

struct OptimumRow {
  std::uint32_t config = 0;
  double performance = 0.0;
};

// Scans configurations in lexicographic order (d_1 varies slowest) and keeps
// the first strict maximum. n <= kMaxBruteForceDecisions.
OptimumRow optimum(const Landscape& landscape);

struct PerformanceRow {
  std::uint32_t config = 0;
  std::uint32_t subset = 0;
  double performance = 0.0;
};

struct OfferRow {
  std::uint32_t config = 0;
  std::uint32_t owned = 0;
  std::uint32_t argmins = 0;  // every owned decision attaining the minimum
  double min_price = 0.0;
};

struct Tables {
  std::size_t n = 0;
  std::vector<PerformanceRow> performance;  // every config x non-empty subset
  OptimumRow optimum;
  std::vector<OfferRow> utility_offers;     // every config x subset of size >= 2
};

// Throws ConfigError for n > kMaxOracleDecisions.
Tables build_tables(const Landscape& landscape);

// Owned decisions (bitmask) with the lowest mean belief towards the other
// owned decisions, and that mean. Requires at least two owned decisions.
OfferRow interdependence_offer(const BeliefCounters& counters, std::uint32_t owned);

// Renders the tables as CSV sections.
void write_tables(std::ostream& out, const Landscape& landscape, const Tables& tables);

}  // namespace orgdesign::oracle
