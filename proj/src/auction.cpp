#include "orgdesign/auction.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "orgdesign/errors.hpp"

namespace orgdesign {

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kUtilityBased:
      return "utility";
    case Strategy::kInterdependenceBased:
      return "interdependence";
    case Strategy::kBenchmarkFixed:
      return "benchmark";
  }
  return "unknown";
}

namespace {

// Index of a minimum of `values`, ties broken uniformly.
std::size_t random_argmin(std::span<const double> values, Rng& rng) {
  const double lowest = *std::min_element(values.begin(), values.end());
  std::vector<std::size_t> ties;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] == lowest) ties.push_back(k);
  }
  return ties.size() == 1 ? ties.front() : ties[uniform_index(rng, ties.size())];
}

}  // namespace

std::optional<Offer> select_offer_utility(std::size_t seller, std::span<const std::size_t> owned,
                                          const Landscape& landscape, const Configuration& config,
                                          Rng& tie_rng) {
  if (owned.size() < 2) return std::nullopt;
  std::vector<double> values;
  values.reserve(owned.size());
  for (std::size_t d : owned) values.push_back(landscape.contribution(config, d));
  const std::size_t k = random_argmin(values, tie_rng);
  return Offer{seller, owned[k], values[k]};
}

std::optional<Offer> select_offer_interdependence(std::size_t seller, std::span<const std::size_t> owned,
                                                  const BeliefCounters& beliefs, Rng& tie_rng) {
  if (owned.size() < 2) return std::nullopt;
  std::vector<double> values;
  values.reserve(owned.size());
  for (std::size_t d : owned) values.push_back(mean_internal_belief(beliefs, owned, d));
  const std::size_t k = random_argmin(values, tie_rng);
  return Offer{seller, owned[k], values[k]};
}

std::optional<Bid> bid_utility(std::size_t bidder, std::size_t owned_count, std::size_t capacity,
                               const Offer& offer, const Landscape& landscape,
                               const Configuration& config, double sigma, Rng& noise_rng) {
  if (bidder == offer.seller) throw ContractViolation("bid_utility: seller cannot bid on own offer");
  if (owned_count >= capacity) return std::nullopt;
  double amount = landscape.contribution(config, offer.decision);
  if (sigma > 0.0) amount += std::normal_distribution<double>(0.0, sigma)(noise_rng);
  return Bid{bidder, offer.decision, amount};
}

std::optional<Bid> bid_interdependence(std::size_t bidder, std::span<const std::size_t> owned,
                                       std::size_t capacity, const BeliefCounters& beliefs,
                                       const Offer& offer) {
  if (bidder == offer.seller) throw ContractViolation("bid_interdependence: seller cannot bid on own offer");
  if (owned.size() >= capacity) return std::nullopt;
  if (owned.empty()) throw ContractViolation("bid_interdependence: bidder owns no decision");
  double sum = 0.0;
  for (std::size_t j : owned) sum += beliefs.belief(offer.decision, j);
  return Bid{bidder, offer.decision, sum / static_cast<double>(owned.size())};
}

ClearingResult clear_auction(std::span<const Offer> offers, Allocation allocation,
                             std::span<const std::size_t> capacities, const BidFunction& bid,
                             std::size_t period, Rng& tie_rng) {
  if (capacities.size() != allocation.agents()) {
    throw ContractViolation("clear_auction: need one capacity per agent");
  }
  for (std::size_t a = 0; a < offers.size(); ++a) {
    for (std::size_t b = a + 1; b < offers.size(); ++b) {
      if (offers[a].seller == offers[b].seller) {
        throw ContractViolation("clear_auction: more than one offer from agent " +
                                std::to_string(offers[a].seller));
      }
    }
  }

  std::vector<std::size_t> order(offers.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), tie_rng);

  ClearingResult result{std::move(allocation), {}};
  Allocation& alloc = result.allocation;

  for (std::size_t k : order) {
    const Offer& offer = offers[k];
    if (alloc.owner(offer.decision) != offer.seller) {
      throw InvariantViolation("period " + std::to_string(period) + ": agent " + std::to_string(offer.seller) +
                               " offers decision " + std::to_string(offer.decision) + " it does not own");
    }
    if (alloc.owned(offer.seller).size() < 2) {
      throw InvariantViolation("period " + std::to_string(period) + ": agent " + std::to_string(offer.seller) +
                               " would drop below one owned decision");
    }

    std::vector<Bid> bids;
    for (std::size_t r = 0; r < alloc.agents(); ++r) {
      if (r == offer.seller || alloc.owned(r).size() >= capacities[r]) continue;
      if (auto b = bid(r, offer, alloc)) bids.push_back(*b);
    }
    if (bids.empty()) continue;

    double best = bids.front().amount;
    for (const Bid& b : bids) best = std::max(best, b.amount);
    if (best < offer.min_price) continue;

    std::vector<std::size_t> top;
    for (std::size_t i = 0; i < bids.size(); ++i) {
      if (bids[i].amount == best) top.push_back(i);
    }
    const std::size_t winner_slot = top.size() == 1 ? top.front() : top[uniform_index(tie_rng, top.size())];

    std::optional<double> second;
    for (std::size_t i = 0; i < bids.size(); ++i) {
      if (i == winner_slot) continue;
      if (!second || bids[i].amount > *second) second = bids[i].amount;
    }
    const double price = second && *second > offer.min_price ? *second : offer.min_price;

    const Bid& win = bids[winner_slot];
    if (win.bidder == offer.seller) throw InvariantViolation("clear_auction: seller won its own offer");
    alloc.transfer(offer.decision, offer.seller, win.bidder);
    try {
      alloc.check(capacities);
    } catch (const InvariantViolation& e) {
      throw InvariantViolation("period " + std::to_string(period) + ", agent " + std::to_string(win.bidder) +
                               ": " + e.what());
    }
    if (price > win.amount || price < offer.min_price) {
      throw InvariantViolation("period " + std::to_string(period) + ": price outside [min_price, winning bid]");
    }
    result.trades.push_back({period, offer.decision, offer.seller, win.bidder, win.amount, price});
  }
  return result;
}

}  // namespace orgdesign
