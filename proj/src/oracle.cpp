#include "orgdesign/oracle.hpp"

#include <bit>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "orgdesign/errors.hpp"

namespace orgdesign::oracle {

namespace {

bool bit(std::uint32_t mask, std::size_t i) { return (mask >> i) & 1U; }

std::string bits(std::uint32_t mask, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(bit(mask, i) ? '1' : '0');
  return s;
}

std::string members(std::uint32_t mask, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    if (!bit(mask, i)) continue;
    if (!s.empty()) s += ' ';
    s += std::to_string(i);
  }
  return s;
}

}  // namespace

InteractionMatrix cyclic_matrix(std::size_t n, std::size_t k) {
  if (n == 0 || k >= n) throw ConfigError("cyclic_matrix needs 0 <= k < n");
  InteractionMatrix m(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t s = 1; s <= k; ++s) m.set(j, (j + s) % n, true);
  }
  return m;
}

double contribution(const Landscape& landscape, std::uint32_t config, std::size_t j) {
  const InteractionMatrix& matrix = landscape.matrix();
  const std::size_t n = matrix.size();
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != j && matrix.depends(j, i)) others.push_back(i);
  }
  // Own bit weighs 2^K, the r-th dependency (ascending) 2^(K-1-r).
  const std::size_t k = others.size();
  std::size_t index = bit(config, j) ? (std::size_t{1} << k) : 0;
  for (std::size_t r = 0; r < k; ++r) {
    if (bit(config, others[r])) index += std::size_t{1} << (k - 1 - r);
  }
  return landscape.table(j)[index];
}

double performance(const Landscape& landscape, std::uint32_t config, std::uint32_t subset) {
  if (subset == 0) throw ContractViolation("oracle::performance: empty subset");
  double sum = 0.0;
  for (std::size_t j = 0; j < landscape.size(); ++j) {
    if (bit(subset, j)) sum += contribution(landscape, config, j);
  }
  return sum / static_cast<double>(std::popcount(subset));
}

OptimumRow optimum(const Landscape& landscape) {
  const std::size_t n = landscape.size();
  if (n > kMaxBruteForceDecisions) throw ConfigError("oracle::optimum: n too large");
  const std::uint32_t all = static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1);
  OptimumRow best;
  bool first = true;
  // Counting over the reversed bit order walks d_1 slowest, i.e. lexicographically.
  for (std::uint64_t rank = 0; rank <= all; ++rank) {
    std::uint32_t config = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((rank >> (n - 1 - i)) & 1U) config |= std::uint32_t{1} << i;
    }
    const double p = performance(landscape, config, all);
    if (first || p > best.performance) {
      best = {config, p};
      first = false;
    }
  }
  return best;
}

Tables build_tables(const Landscape& landscape) {
  const std::size_t n = landscape.size();
  if (n > kMaxOracleDecisions) {
    throw ConfigError("oracle tables are limited to n <= " + std::to_string(kMaxOracleDecisions) + ", got " +
                      std::to_string(n));
  }
  Tables t;
  t.n = n;
  const std::uint32_t count = std::uint32_t{1} << n;
  for (std::uint32_t config = 0; config < count; ++config) {
    for (std::uint32_t subset = 1; subset < count; ++subset) {
      t.performance.push_back({config, subset, performance(landscape, config, subset)});
      if (std::popcount(subset) < 2) continue;
      OfferRow row{config, subset, 0, 0.0};
      bool first = true;
      for (std::size_t j = 0; j < n; ++j) {
        if (!bit(subset, j)) continue;
        const double f = contribution(landscape, config, j);
        if (first || f < row.min_price) {
          row.min_price = f;
          row.argmins = std::uint32_t{1} << j;
          first = false;
        } else if (f == row.min_price) {
          row.argmins |= std::uint32_t{1} << j;
        }
      }
      t.utility_offers.push_back(row);
    }
  }
  t.optimum = optimum(landscape);
  return t;
}

OfferRow interdependence_offer(const BeliefCounters& counters, std::uint32_t owned) {
  if (std::popcount(owned) < 2) throw ContractViolation("oracle::interdependence_offer: need two owned");
  OfferRow row{0, owned, 0, 0.0};
  bool first = true;
  for (std::size_t i = 0; i < counters.size(); ++i) {
    if (!bit(owned, i)) continue;
    double sum = 0.0;
    for (std::size_t j = 0; j < counters.size(); ++j) {
      if (j == i || !bit(owned, j)) continue;
      const double p = counters.p(i, j);
      const double q = counters.q(i, j);
      sum += p / (p + q);
    }
    const double mean = sum / static_cast<double>(std::popcount(owned) - 1);
    if (first || mean < row.min_price) {
      row.min_price = mean;
      row.argmins = std::uint32_t{1} << i;
      first = false;
    } else if (mean == row.min_price) {
      row.argmins |= std::uint32_t{1} << i;
    }
  }
  return row;
}

void write_tables(std::ostream& out, const Landscape& landscape, const Tables& t) {
  const std::size_t n = t.n;
  out << "# tables\ndecision,index,value\n";
  for (std::size_t j = 0; j < n; ++j) {
    const auto table = landscape.table(j);
    for (std::size_t k = 0; k < table.size(); ++k) fmt::print(out, "{},{},{}\n", j, k, table[k]);
  }
  out << "# performance\nconfig,subset,performance\n";
  for (const auto& row : t.performance) {
    fmt::print(out, "{},{},{}\n", bits(row.config, n), members(row.subset, n), row.performance);
  }
  out << "# optimum\nconfig,performance\n";
  fmt::print(out, "{},{}\n", bits(t.optimum.config, n), t.optimum.performance);
  out << "# utility_offers\nconfig,owned,argmin,min_price\n";
  for (const auto& row : t.utility_offers) {
    fmt::print(out, "{},{},{},{}\n", bits(row.config, n), members(row.owned, n), members(row.argmins, n),
               row.min_price);
  }
}

}  // namespace orgdesign::oracle
