#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace orgdesign {

// Beta(p, q) evidence counters over ordered decision pairs (i, j), i != j:
// the agent's belief that flipping decision i moves the contribution of j.
// Counters start at p = q = 1 and are kept for every pair, not only the
// currently owned ones, because they stay with the agent across trades.
class BeliefCounters {
 public:
  BeliefCounters() = default;
  // Requires n >= 2.
  explicit BeliefCounters(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  std::uint32_t p(std::size_t i, std::size_t j) const;
  std::uint32_t q(std::size_t i, std::size_t j) const;
  // Overwrites a pair's counters; both must be >= 1.
  void set(std::size_t i, std::size_t j, std::uint32_t p, std::uint32_t q);
  // One observation of pair (i, j).
  void record(std::size_t i, std::size_t j, bool changed);

  // p / (p + q).
  double belief(std::size_t i, std::size_t j) const;

  // Sum over pairs of (p + q - 2): total observations processed.
  std::uint64_t observations() const;

  friend bool operator==(const BeliefCounters&, const BeliefCounters&) = default;

 private:
  std::size_t offset(std::size_t i, std::size_t j) const;

  std::size_t n_ = 0;
  std::vector<std::uint32_t> p_;
  std::vector<std::uint32_t> q_;
};

BeliefCounters init_beliefs(std::size_t n);

// Belief update after the agent flipped `flipped`: for every other owned j,
// compare f(d_j) between the previous and the current period with exact
// equality. A change counts for p, no change for q. Only owned entries of
// the contribution vectors are read. Returns the number of observations.
std::size_t update_beliefs(BeliefCounters& counters, std::span<const std::size_t> owned,
                           std::size_t flipped, std::span<const double> contributions_prev,
                           std::span<const double> contributions_now);

// Mean belief from owned decision i to the other owned decisions.
// Requires at least two owned decisions.
double mean_internal_belief(const BeliefCounters& counters, std::span<const std::size_t> owned,
                            std::size_t i);

}  // namespace orgdesign
