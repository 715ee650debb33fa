#pragma once

#include <optional>
#include <span>
#include <vector>

#include "orgdesign/landscape.hpp"
#include "orgdesign/learning.hpp"
#include "orgdesign/rng.hpp"

namespace orgdesign {

// Linear weighting of own versus residual performance.
struct IncentiveScheme {
  double alpha = 1.0;
  double beta = 0.0;

  // Throws ConfigError unless 0 <= alpha, beta <= 1 and alpha + beta = 1.
  static IncentiveScheme make(double alpha, double beta);
  static IncentiveScheme individualistic() { return {1.0, 0.0}; }
  static IncentiveScheme balanced() { return {0.5, 0.5}; }
  static IncentiveScheme altruistic() { return {0.25, 0.75}; }

  friend bool operator==(const IncentiveScheme&, const IncentiveScheme&) = default;
};

double utility(const IncentiveScheme& scheme, double own_performance, double residual_performance);

// Partition of the decisions among agents. Each agent's owned list is kept
// sorted ascending.
class Allocation {
 public:
  Allocation() = default;
  // owner[d] is the agent responsible for decision d.
  Allocation(std::vector<std::size_t> owner, std::size_t agents);

  std::size_t decisions() const noexcept { return owner_.size(); }
  std::size_t agents() const noexcept { return owned_.size(); }
  std::size_t owner(std::size_t decision) const;
  std::span<const std::size_t> owned(std::size_t agent) const;
  std::vector<std::size_t> residual(std::size_t agent) const;
  std::vector<std::size_t> owned_sizes() const;

  // Moves `decision` from `from` to `to`. Throws InvariantViolation if
  // `from` does not own it.
  void transfer(std::size_t decision, std::size_t from, std::size_t to);

  // Partition, owned floor of 1 and per-agent capacity. Throws
  // InvariantViolation describing the first breach.
  void check(std::span<const std::size_t> capacities) const;

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::vector<std::size_t> owner_;
  std::vector<std::vector<std::size_t>> owned_;
};

// Uniformly random equal split: each agent gets n/m decisions.
Allocation initial_allocation(std::size_t n, std::size_t m, std::span<const std::size_t> capacities,
                              Rng& rng);

// Contiguous blocks: agent k owns [k n/m, (k+1) n/m).
Allocation mirrored_allocation(const InteractionMatrix& matrix, std::size_t m);

struct AgentState {
  std::size_t id = 0;
  std::size_t capacity = 0;
  BeliefCounters beliefs;
};

struct NeighborProposal {
  Configuration config;
  std::size_t flipped = 0;
};

// Flips one uniformly chosen owned decision.
NeighborProposal propose_neighbor(std::span<const std::size_t> owned, const Configuration& current,
                                  Rng& rng);

// An agent's choice for the coming period: values of its owned decisions,
// aligned with `decisions`.
struct AgentDecision {
  std::vector<std::size_t> decisions;
  std::vector<std::uint8_t> values;
  std::optional<std::size_t> flipped;
};

// One hillclimbing move. Both the status quo and one random neighbor are
// scored against the residual decisions of `prev`; the neighbor is adopted
// only if its utility is strictly higher. An empty residual scores 0.
AgentDecision hillclimb_step(std::span<const std::size_t> owned, std::span<const std::size_t> residual,
                             const Landscape& landscape, const Configuration& prev,
                             const IncentiveScheme& scheme, Rng& rng);

// Concatenates the agents' choices into a full configuration. Overlapping
// or missing decisions throw InvariantViolation.
Configuration assemble_configuration(std::size_t n, std::span<const AgentDecision> choices);

}  // namespace orgdesign
