#include "orgdesign/learning.hpp"

#include <algorithm>
#include <string>

#include "orgdesign/errors.hpp"

namespace orgdesign {

BeliefCounters::BeliefCounters(std::size_t n) : n_(n), p_(n * n, 1), q_(n * n, 1) {
  if (n < 2) throw ContractViolation("BeliefCounters: need at least two decisions");
}

std::size_t BeliefCounters::offset(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw ContractViolation("BeliefCounters: index out of range");
  if (i == j) throw ContractViolation("BeliefCounters: no belief about a decision and itself");
  return i * n_ + j;
}

std::uint32_t BeliefCounters::p(std::size_t i, std::size_t j) const { return p_[offset(i, j)]; }
std::uint32_t BeliefCounters::q(std::size_t i, std::size_t j) const { return q_[offset(i, j)]; }

void BeliefCounters::set(std::size_t i, std::size_t j, std::uint32_t p, std::uint32_t q) {
  if (p == 0 || q == 0) throw ContractViolation("BeliefCounters: counters must be >= 1");
  const std::size_t o = offset(i, j);
  p_[o] = p;
  q_[o] = q;
}

void BeliefCounters::record(std::size_t i, std::size_t j, bool changed) {
  const std::size_t o = offset(i, j);
  ++(changed ? p_[o] : q_[o]);
}

double BeliefCounters::belief(std::size_t i, std::size_t j) const {
  const std::size_t o = offset(i, j);
  return static_cast<double>(p_[o]) / static_cast<double>(p_[o] + q_[o]);
}

std::uint64_t BeliefCounters::observations() const {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (i != j) total += std::uint64_t{p_[i * n_ + j]} + q_[i * n_ + j] - 2;
    }
  }
  return total;
}

BeliefCounters init_beliefs(std::size_t n) { return BeliefCounters(n); }

std::size_t update_beliefs(BeliefCounters& counters, std::span<const std::size_t> owned,
                           std::size_t flipped, std::span<const double> contributions_prev,
                           std::span<const double> contributions_now) {
  if (std::find(owned.begin(), owned.end(), flipped) == owned.end()) {
    throw ContractViolation("update_beliefs: decision " + std::to_string(flipped) +
                            " is not owned by the agent");
  }
  std::size_t observed = 0;
  for (std::size_t j : owned) {
    if (j == flipped) continue;
    if (j >= contributions_prev.size() || j >= contributions_now.size()) {
      throw ContractViolation("update_beliefs: contribution vectors do not cover owned decisions");
    }
    counters.record(flipped, j, contributions_now[j] != contributions_prev[j]);
    ++observed;
  }
  return observed;
}

double mean_internal_belief(const BeliefCounters& counters, std::span<const std::size_t> owned,
                            std::size_t i) {
  if (owned.size() < 2) throw ContractViolation("mean_internal_belief: need two owned decisions");
  if (std::find(owned.begin(), owned.end(), i) == owned.end()) {
    throw ContractViolation("mean_internal_belief: decision is not owned");
  }
  double sum = 0.0;
  for (std::size_t j : owned) {
    if (j != i) sum += counters.belief(i, j);
  }
  return sum / static_cast<double>(owned.size() - 1);
}

}  // namespace orgdesign
