#include <cmath>
#include <map>

#include "doctest.h"
#include "helpers.hpp"
#include "orgdesign/auction.hpp"
#include "orgdesign/errors.hpp"
#include "orgdesign/oracle.hpp"

using namespace orgdesign;
using orgdesign::testing::constant_landscape;
using orgdesign::testing::random_landscape;

namespace {

// Bid function returning fixed amounts per bidder; bidders not listed abstain.
BidFunction fixed_bids(std::map<std::size_t, double> amounts) {
  return [amounts](std::size_t bidder, const Offer& offer, const Allocation&) -> std::optional<Bid> {
    auto it = amounts.find(bidder);
    if (it == amounts.end()) return std::nullopt;
    return Bid{bidder, offer.decision, it->second};
  };
}

}  // namespace

TEST_CASE("utility-based offers") {
  // K=0 landscape with f_j(0) chosen per decision.
  const Landscape l(InteractionMatrix(3), {{0.7, 0.1}, {0.2, 0.3}, {0.9, 0.4}});
  const Configuration c(3);
  Rng rng(1);
  SUBCASE("lowest contribution is offered at its value") {
    const auto offer = select_offer_utility(4, std::vector<std::size_t>{0, 1, 2}, l, c, rng);
    REQUIRE(offer);
    CHECK(offer->seller == 4);
    CHECK(offer->decision == 1);
    CHECK(offer->min_price == 0.2);
  }
  SUBCASE("ties are broken uniformly") {
    const auto flat = constant_landscape(InteractionMatrix(3), 0.5);
    std::vector<int> hits(3, 0);
    for (int i = 0; i < 3000; ++i) ++hits[select_offer_utility(0, std::vector<std::size_t>{0, 1, 2}, flat, c, rng)->decision];
    for (int h : hits) CHECK(std::abs(h / 3000.0 - 1.0 / 3.0) <= 0.05);
  }
  SUBCASE("a single owned decision is never offered") {
    CHECK_FALSE(select_offer_utility(0, std::vector<std::size_t>{2}, l, c, rng));
  }
}

TEST_CASE("interdependence-based offers") {
  Rng rng(2);
  SUBCASE("prior beliefs: price 0.5, uniform choice") {
    const BeliefCounters prior(4);
    std::vector<int> hits(4, 0);
    for (int i = 0; i < 3000; ++i) {
      const auto offer = select_offer_interdependence(0, std::vector<std::size_t>{0, 1, 3}, prior, rng);
      CHECK(offer->min_price == 0.5);
      ++hits[offer->decision];
    }
    CHECK(hits[2] == 0);
    for (std::size_t d : {0, 1, 3}) CHECK(std::abs(hits[d] / 3000.0 - 1.0 / 3.0) <= 0.05);
  }
  SUBCASE("lowest internal belief is offered") {
    BeliefCounters c(3);
    c.set(0, 1, 9, 1);
    c.set(0, 2, 9, 1);
    c.set(1, 0, 1, 9);
    c.set(1, 2, 1, 9);
    c.set(2, 0, 5, 5);
    c.set(2, 1, 5, 5);
    const auto offer = select_offer_interdependence(0, std::vector<std::size_t>{0, 1, 2}, c, rng);
    CHECK(offer->decision == 1);
    CHECK(offer->min_price == doctest::Approx(0.1).epsilon(1e-15));
  }
  SUBCASE("random counters against the brute-force argmin") {
    for (int trial = 0; trial < 200; ++trial) {
      BeliefCounters c(5);
      for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
          if (i != j) c.set(i, j, 1 + uniform_index(rng, 4), 1 + uniform_index(rng, 4));
        }
      }
      const std::uint32_t owned_mask = 0b10111;
      const std::vector<std::size_t> owned{0, 1, 2, 4};
      const auto expected = oracle::interdependence_offer(c, owned_mask);
      const auto offer = select_offer_interdependence(3, owned, c, rng);
      CHECK(((expected.argmins >> offer->decision) & 1U) == 1U);
      CHECK(offer->min_price == expected.min_price);
    }
  }
  SUBCASE("abstains below two owned") {
    CHECK_FALSE(select_offer_interdependence(0, std::vector<std::size_t>{1}, BeliefCounters(3), rng));
  }
}

TEST_CASE("utility-based bids") {
  const auto l = random_landscape(build_stylized_matrix(StructureKind::kDecomposableK2, 6), 3);
  Rng rng(4);
  const auto config = Configuration::random(6, rng);
  const Offer offer{0, 4, 0.3};
  const double truth = l.contribution(config, 4);
  SUBCASE("noiseless bid equals the true contribution") {
    CHECK(bid_utility(1, 2, 5, offer, l, config, 0.0, rng)->amount == truth);
  }
  SUBCASE("bidder at capacity abstains") {
    CHECK_FALSE(bid_utility(1, 5, 5, offer, l, config, 0.05, rng));
  }
  SUBCASE("noise has the configured mean and spread") {
    double sum = 0.0, sum2 = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
      const double e = bid_utility(1, 1, 5, offer, l, config, 0.05, rng)->amount - truth;
      sum += e;
      sum2 += e * e;
    }
    const double mean = sum / draws;
    const double sd = std::sqrt((sum2 - draws * mean * mean) / (draws - 1));
    CHECK(std::abs(mean) <= 0.002);
    CHECK(std::abs(sd - 0.05) <= 0.005);
  }
  SUBCASE("seller cannot bid on its own offer") {
    CHECK_THROWS_AS(bid_utility(0, 1, 5, offer, l, config, 0.0, rng), ContractViolation);
  }
}

TEST_CASE("interdependence-based bids") {
  const Offer offer{0, 2, 0.4};
  SUBCASE("prior beliefs bid 0.5") {
    CHECK(bid_interdependence(1, std::vector<std::size_t>{0, 4}, 5, BeliefCounters(5), offer)->amount == 0.5);
  }
  SUBCASE("single owned decision") {
    BeliefCounters c(5);
    c.set(2, 3, 7, 3);
    CHECK(bid_interdependence(1, std::vector<std::size_t>{3}, 5, c, offer)->amount == 0.7);
  }
  SUBCASE("hand-built counters against a naive loop") {
    BeliefCounters c(5);
    c.set(2, 0, 2, 1);
    c.set(2, 1, 1, 4);
    c.set(2, 4, 3, 3);
    c.set(0, 2, 9, 1);  // reverse direction must not matter
    const std::vector<std::size_t> owned{0, 1, 4};
    double naive = 0.0;
    for (std::size_t j : owned) naive += static_cast<double>(c.p(2, j)) / (c.p(2, j) + c.q(2, j));
    naive /= 3.0;
    CHECK(bid_interdependence(1, owned, 5, c, offer)->amount == naive);
  }
  SUBCASE("bidder at capacity abstains") {
    CHECK_FALSE(bid_interdependence(1, std::vector<std::size_t>{0, 1}, 2, BeliefCounters(5), offer));
  }
}

TEST_CASE("clear_auction") {
  // Agents 0..2, decisions 0..5, two each.
  const Allocation start({0, 0, 1, 1, 2, 2}, 3);
  const std::vector<std::size_t> caps(3, 3);
  Rng rng(7);

  SUBCASE("single bid pays the minimum price") {
    const std::vector<Offer> offers{{0, 1, 0.5}};
    const auto result = clear_auction(offers, start, caps, fixed_bids({{1, 0.8}}), 25, rng);
    REQUIRE(result.trades.size() == 1);
    const auto& t = result.trades.front();
    CHECK(t.winner == 1);
    CHECK(t.winning_bid == 0.8);
    CHECK(t.price == 0.5);
    CHECK(t.period == 25);
    CHECK(result.allocation.owner(1) == 1);
    CHECK(result.allocation.owned(0).size() == 1);
  }
  SUBCASE("second-highest bid sets the price") {
    const std::vector<Offer> offers{{0, 1, 0.5}};
    const auto result = clear_auction(offers, start, caps, fixed_bids({{1, 0.7}, {2, 0.9}}), 25, rng);
    REQUIRE(result.trades.size() == 1);
    CHECK(result.trades[0].winner == 2);
    CHECK(result.trades[0].price == 0.7);
  }
  SUBCASE("second bid below the minimum price is ignored") {
    const std::vector<Offer> offers{{0, 1, 0.5}};
    const auto result = clear_auction(offers, start, caps, fixed_bids({{1, 0.3}, {2, 0.9}}), 25, rng);
    CHECK(result.trades[0].price == 0.5);
  }
  SUBCASE("a bid equal to the minimum price wins") {
    const std::vector<Offer> offers{{0, 1, 0.5}};
    const auto result = clear_auction(offers, start, caps, fixed_bids({{1, 0.5}}), 25, rng);
    REQUIRE(result.trades.size() == 1);
    CHECK(result.trades[0].price == 0.5);
  }
  SUBCASE("all bids below the minimum price: no trade") {
    const std::vector<Offer> offers{{0, 1, 0.5}};
    const auto result = clear_auction(offers, start, caps, fixed_bids({{1, 0.45}, {2, 0.1}}), 25, rng);
    CHECK(result.trades.empty());
    CHECK(result.allocation == start);
  }
  SUBCASE("a seller left with one decision cannot offer again") {
    const std::vector<Offer> offers{{0, 0, 0.1}};
    const auto result = clear_auction(offers, start, caps, fixed_bids({{2, 0.9}}), 25, rng);
    CHECK(result.allocation.owned(0).size() == 1);
    const Landscape l = constant_landscape(InteractionMatrix(6), 0.5);
    CHECK_FALSE(select_offer_utility(0, result.allocation.owned(0), l, Configuration(6), rng));
  }
  SUBCASE("capacity is re-checked while clearing") {
    // Agent 2 has room for one more decision and bids highest on both offers.
    const std::vector<Offer> offers{{0, 0, 0.1}, {1, 2, 0.1}};
    for (int round = 0; round < 20; ++round) {
      const auto result = clear_auction(offers, start, caps, fixed_bids({{0, 0.4}, {1, 0.4}, {2, 0.9}}), 25, rng);
      result.allocation.check(caps);
      CHECK(result.allocation.owned(2).size() == 3);
      CHECK(result.trades.size() == 2);
      for (const auto& t : result.trades) CHECK(t.price <= t.winning_bid);
    }
  }
  SUBCASE("tied top bids are split at random") {
    const std::vector<Offer> offers{{0, 1, 0.5}};
    int to_one = 0;
    for (int i = 0; i < 2000; ++i) {
      const auto r = clear_auction(offers, start, caps, fixed_bids({{1, 0.8}, {2, 0.8}}), 25, rng);
      to_one += r.trades[0].winner == 1;
      CHECK(r.trades[0].price == 0.8);
    }
    CHECK(std::abs(to_one / 2000.0 - 0.5) <= 0.05);
  }
  SUBCASE("deterministic bids and order give identical results") {
    const std::vector<Offer> offers{{0, 0, 0.2}, {1, 3, 0.2}, {2, 4, 0.2}};
    Rng a(99), b(99);
    const auto bids = fixed_bids({{0, 0.3}, {1, 0.6}, {2, 0.5}});
    const auto ra = clear_auction(offers, start, caps, bids, 50, a);
    const auto rb = clear_auction(offers, start, caps, bids, 50, b);
    CHECK(ra.allocation == rb.allocation);
    REQUIRE(ra.trades.size() == rb.trades.size());
    for (std::size_t i = 0; i < ra.trades.size(); ++i) CHECK(ra.trades[i].decision == rb.trades[i].decision);
  }
  SUBCASE("duplicate sellers are rejected") {
    const std::vector<Offer> offers{{0, 0, 0.2}, {0, 1, 0.2}};
    CHECK_THROWS_AS(clear_auction(offers, start, caps, fixed_bids({}), 25, rng), ContractViolation);
  }
  SUBCASE("random rounds keep every invariant") {
    const auto l = random_landscape(build_stylized_matrix(StructureKind::kNondecomposableK5, 15), 5);
    const std::vector<std::size_t> caps5(5, 5);
    Allocation alloc = initial_allocation(15, 5, caps5, rng);
    Rng noise(8);
    for (int round = 0; round < 300; ++round) {
      const auto config = Configuration::random(15, rng);
      std::vector<Offer> offers;
      for (std::size_t a = 0; a < 5; ++a) {
        if (auto o = select_offer_utility(a, alloc.owned(a), l, config, rng)) offers.push_back(*o);
      }
      BidFunction bid = [&](std::size_t r, const Offer& o, const Allocation& running) {
        return bid_utility(r, running.owned(r).size(), caps5[r], o, l, config, 0.2, noise);
      };
      auto result = clear_auction(offers, alloc, caps5, bid, 25, rng);
      result.allocation.check(caps5);
      for (const auto& t : result.trades) {
        CHECK(t.seller != t.winner);
        CHECK(t.price <= t.winning_bid);
        const auto& offer = *std::find_if(offers.begin(), offers.end(), [&](const Offer& o) { return o.decision == t.decision; });
        CHECK(t.price >= offer.min_price);
      }
      alloc = result.allocation;
    }
  }
}
