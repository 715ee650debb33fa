#include "orgdesign/organization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "orgdesign/errors.hpp"

namespace orgdesign {

IncentiveScheme IncentiveScheme::make(double alpha, double beta) {
  if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0)) {
    throw ConfigError("incentive weights must lie in [0,1]");
  }
  if (std::abs(alpha + beta - 1.0) > 1e-12) throw ConfigError("incentive weights must sum to 1");
  return {alpha, beta};
}

double utility(const IncentiveScheme& scheme, double own_performance, double residual_performance) {
  return scheme.alpha * own_performance + scheme.beta * residual_performance;
}

Allocation::Allocation(std::vector<std::size_t> owner, std::size_t agents)
    : owner_(std::move(owner)), owned_(agents) {
  for (std::size_t d = 0; d < owner_.size(); ++d) {
    if (owner_[d] >= agents) throw ContractViolation("Allocation: owner index out of range");
    owned_[owner_[d]].push_back(d);
  }
}

std::size_t Allocation::owner(std::size_t decision) const {
  if (decision >= owner_.size()) throw ContractViolation("Allocation: decision out of range");
  return owner_[decision];
}

std::span<const std::size_t> Allocation::owned(std::size_t agent) const {
  if (agent >= owned_.size()) throw ContractViolation("Allocation: agent out of range");
  return owned_[agent];
}

std::vector<std::size_t> Allocation::residual(std::size_t agent) const {
  if (agent >= owned_.size()) throw ContractViolation("Allocation: agent out of range");
  std::vector<std::size_t> out;
  out.reserve(owner_.size() - owned_[agent].size());
  for (std::size_t d = 0; d < owner_.size(); ++d) {
    if (owner_[d] != agent) out.push_back(d);
  }
  return out;
}

std::vector<std::size_t> Allocation::owned_sizes() const {
  std::vector<std::size_t> sizes;
  sizes.reserve(owned_.size());
  for (const auto& o : owned_) sizes.push_back(o.size());
  return sizes;
}

void Allocation::transfer(std::size_t decision, std::size_t from, std::size_t to) {
  if (decision >= owner_.size() || from >= owned_.size() || to >= owned_.size()) {
    throw InvariantViolation("transfer: index out of range");
  }
  if (owner_[decision] != from) {
    throw InvariantViolation("transfer: agent " + std::to_string(from) + " does not own decision " +
                             std::to_string(decision));
  }
  if (from == to) throw InvariantViolation("transfer: seller and buyer coincide");
  auto& src = owned_[from];
  src.erase(std::find(src.begin(), src.end(), decision));
  auto& dst = owned_[to];
  dst.insert(std::upper_bound(dst.begin(), dst.end(), decision), decision);
  owner_[decision] = to;
}

void Allocation::check(std::span<const std::size_t> capacities) const {
  if (capacities.size() != owned_.size()) throw InvariantViolation("allocation: capacity list size mismatch");
  std::vector<int> seen(owner_.size(), 0);
  for (std::size_t a = 0; a < owned_.size(); ++a) {
    if (owned_[a].empty()) throw InvariantViolation("agent " + std::to_string(a) + " owns no decision");
    if (owned_[a].size() > capacities[a]) {
      throw InvariantViolation("agent " + std::to_string(a) + " owns " + std::to_string(owned_[a].size()) +
                               " decisions, capacity " + std::to_string(capacities[a]));
    }
    for (std::size_t d : owned_[a]) {
      if (d >= owner_.size() || owner_[d] != a || seen[d]++) {
        throw InvariantViolation("allocation is not a partition at decision " + std::to_string(d));
      }
    }
  }
  for (std::size_t d = 0; d < owner_.size(); ++d) {
    if (!seen[d]) throw InvariantViolation("decision " + std::to_string(d) + " has no owner");
  }
}

Allocation initial_allocation(std::size_t n, std::size_t m, std::span<const std::size_t> capacities,
                              Rng& rng) {
  if (m == 0 || n % m != 0) {
    throw ConfigError("cannot split " + std::to_string(n) + " decisions equally among " +
                      std::to_string(m) + " agents");
  }
  if (capacities.size() != m) throw ConfigError("need one capacity per agent");
  const std::size_t share = n / m;
  for (std::size_t c : capacities) {
    if (c < share) throw ConfigError("capacity below the initial share n/m");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> owner(n);
  for (std::size_t k = 0; k < n; ++k) owner[order[k]] = k / share;
  return Allocation(std::move(owner), m);
}

Allocation mirrored_allocation(const InteractionMatrix& matrix, std::size_t m) {
  const std::size_t n = matrix.size();
  if (m == 0 || n % m != 0) {
    throw ConfigError("cannot split " + std::to_string(n) + " decisions into " + std::to_string(m) +
                      " contiguous blocks");
  }
  std::vector<std::size_t> owner(n);
  for (std::size_t d = 0; d < n; ++d) owner[d] = d / (n / m);
  return Allocation(std::move(owner), m);
}

NeighborProposal propose_neighbor(std::span<const std::size_t> owned, const Configuration& current,
                                  Rng& rng) {
  if (owned.empty()) throw ContractViolation("propose_neighbor: agent owns no decision");
  const std::size_t flipped = owned[uniform_index(rng, owned.size())];
  Configuration next = current;
  next.flip(flipped);
  return {std::move(next), flipped};
}

namespace {

double agent_utility(const Landscape& landscape, const Configuration& config,
                     std::span<const std::size_t> owned, std::span<const std::size_t> residual,
                     const IncentiveScheme& scheme) {
  const double own = landscape.performance(config, owned);
  const double rest = residual.empty() ? 0.0 : landscape.performance(config, residual);
  return utility(scheme, own, rest);
}

}  // namespace

AgentDecision hillclimb_step(std::span<const std::size_t> owned, std::span<const std::size_t> residual,
                             const Landscape& landscape, const Configuration& prev,
                             const IncentiveScheme& scheme, Rng& rng) {
  NeighborProposal proposal = propose_neighbor(owned, prev, rng);
  const double status_quo = agent_utility(landscape, prev, owned, residual, scheme);
  const double candidate = agent_utility(landscape, proposal.config, owned, residual, scheme);

  const bool adopt = !(status_quo >= candidate);
  const Configuration& chosen = adopt ? proposal.config : prev;

  AgentDecision decision;
  decision.decisions.assign(owned.begin(), owned.end());
  decision.values.reserve(owned.size());
  for (std::size_t d : owned) decision.values.push_back(chosen[d]);
  if (adopt) decision.flipped = proposal.flipped;
  return decision;
}

Configuration assemble_configuration(std::size_t n, std::span<const AgentDecision> choices) {
  Configuration out(n);
  std::vector<int> seen(n, 0);
  for (const AgentDecision& choice : choices) {
    if (choice.decisions.size() != choice.values.size()) {
      throw ContractViolation("assemble_configuration: decisions and values differ in length");
    }
    for (std::size_t k = 0; k < choice.decisions.size(); ++k) {
      const std::size_t d = choice.decisions[k];
      if (d >= n) throw InvariantViolation("assemble_configuration: decision out of range");
      if (seen[d]++) throw InvariantViolation("assemble_configuration: decision " + std::to_string(d) +
                                              " chosen by more than one agent");
      out.set(d, choice.values[k]);
    }
  }
  for (std::size_t d = 0; d < n; ++d) {
    if (!seen[d]) throw InvariantViolation("assemble_configuration: decision " + std::to_string(d) +
                                           " has no owner");
  }
  return out;
}

}  // namespace orgdesign
