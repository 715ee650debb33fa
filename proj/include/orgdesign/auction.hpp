#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "orgdesign/landscape.hpp"
#include "orgdesign/learning.hpp"
#include "orgdesign/organization.hpp"
#include "orgdesign/rng.hpp"

namespace orgdesign {

enum class Strategy { kUtilityBased, kInterdependenceBased, kBenchmarkFixed };

std::string_view to_string(Strategy strategy);

struct Offer {
  std::size_t seller = 0;
  std::size_t decision = 0;
  double min_price = 0.0;
};

struct Bid {
  std::size_t bidder = 0;
  std::size_t decision = 0;
  double amount = 0.0;
};

struct TradeRecord {
  std::size_t period = 0;
  std::size_t decision = 0;
  std::size_t seller = 0;
  std::size_t winner = 0;
  double winning_bid = 0.0;
  double price = 0.0;
};

// Utility-based offer: the owned decision with the lowest current
// contribution, at that contribution. No offer with fewer than 2 owned.
std::optional<Offer> select_offer_utility(std::size_t seller, std::span<const std::size_t> owned,
                                          const Landscape& landscape, const Configuration& config,
                                          Rng& tie_rng);

// Interdependence-based offer: the owned decision with the lowest mean
// internal belief, at that mean. No offer with fewer than 2 owned.
std::optional<Offer> select_offer_interdependence(std::size_t seller, std::span<const std::size_t> owned,
                                                  const BeliefCounters& beliefs, Rng& tie_rng);

// True contribution of the offered decision plus N(0, sigma) noise. The
// amount is not clamped. Abstains at capacity.
std::optional<Bid> bid_utility(std::size_t bidder, std::size_t owned_count, std::size_t capacity,
                               const Offer& offer, const Landscape& landscape,
                               const Configuration& config, double sigma, Rng& noise_rng);

// Mean belief from the offered decision to every owned decision of the
// bidder. Abstains at capacity.
std::optional<Bid> bid_interdependence(std::size_t bidder, std::span<const std::size_t> owned,
                                       std::size_t capacity, const BeliefCounters& beliefs,
                                       const Offer& offer);

// Produces the bid of `bidder` on `offer` given the running allocation.
using BidFunction =
    std::function<std::optional<Bid>(std::size_t bidder, const Offer& offer, const Allocation& allocation)>;

struct ClearingResult {
  Allocation allocation;
  std::vector<TradeRecord> trades;
};

// Sequential second-price clearing. Offers are processed in uniformly random
// order. For each offer, agents other than the seller with spare capacity in
// the running allocation are asked for a bid; the highest bid wins (ties at
// random) if it reaches the minimum price. The winner pays the second highest
// bid when that exceeds the minimum price, otherwise the minimum price.
// Allocation invariants are checked after every trade.
ClearingResult clear_auction(std::span<const Offer> offers, Allocation allocation,
                             std::span<const std::size_t> capacities, const BidFunction& bid,
                             std::size_t period, Rng& tie_rng);

}  // namespace orgdesign
