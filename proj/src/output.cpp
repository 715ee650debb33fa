#include "orgdesign/output.hpp"

#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include "json.hpp"

#include "orgdesign/rng.hpp"

namespace orgdesign {

void write_results_csv(std::ostream& out, std::span<const ExperimentResult> results) {
  out << "cell,period,mean_norm_perf,ci99_half_width\n";
  for (const ExperimentResult& r : results) {
    for (std::size_t t = 0; t < r.mean.size(); ++t) {
      fmt::print(out, "{},{},{},{}\n", r.cell, t + 1, r.mean[t], r.ci_half_width[t]);
    }
  }
}

void write_trades_csv(std::ostream& out, std::span<const ExperimentResult> results) {
  out << "cell,replication,period,decision,seller,winner,winning_bid,price,strategy\n";
  for (const ExperimentResult& r : results) {
    const auto strategy = to_string(r.scenario.strategy);
    for (std::size_t rep = 0; rep < r.traces.size(); ++rep) {
      for (const TradeRecord& t : r.traces[rep].trades) {
        fmt::print(out, "{},{},{},{},{},{},{},{},{}\n", r.cell, rep, t.period, t.decision, t.seller, t.winner,
                   t.winning_bid, t.price, strategy);
      }
    }
  }
}

void write_beliefs_csv(std::ostream& out, std::span<const ExperimentResult> results) {
  out << "cell,replication,period,agent,i,j,p,q,belief\n";
  for (const ExperimentResult& r : results) {
    for (std::size_t rep = 0; rep < r.traces.size(); ++rep) {
      for (const BeliefSnapshot& snap : r.traces[rep].belief_snapshots) {
        const BeliefCounters& c = snap.counters;
        for (std::size_t i = 0; i < c.size(); ++i) {
          for (std::size_t j = 0; j < c.size(); ++j) {
            if (i == j) continue;
            fmt::print(out, "{},{},{},{},{},{},{},{},{}\n", r.cell, rep, snap.period, snap.agent, i, j, c.p(i, j),
                       c.q(i, j), c.belief(i, j));
          }
        }
      }
    }
  }
}

std::string metadata_json(const RunSettings& run, std::span<const ExperimentResult> results) {
  nlohmann::ordered_json doc;
  doc["artifact"] = "orgdesign";
  doc["version"] = std::string(kArtifactVersion);
  doc["generator"] = std::string(kGeneratorName);

  nlohmann::ordered_json echo = nlohmann::ordered_json::object();
  for (const Setting& s : to_settings(run)) echo[s.key] = s.value;
  doc["scenario"] = echo;

  doc["conventions"] = {
      {"table_index", "own decision is the most significant bit, dependencies follow in ascending order"},
      {"contribution_distribution", "uniform [0,1), 53-bit"},
      {"initial_configuration", "uniform over all 2^N decision vectors"},
      {"initial_allocation", "uniform random equal split; mirrored blocks for the benchmark"},
      {"optimum_tie_break", "lexicographically lowest configuration"},
      {"confidence_interval", "2.576 * sample_sd / sqrt(S)"},
      {"seed_scheme",
       "cell seed = master + cell * 0x9E3779B97F4A7C15; replication seed = mix64(mix64(cell seed) ^ "
       "mix64(r + 1)); stream = mt19937_64(mix64(replication seed ^ mix64(role << 32)))"},
      {"stream_roles",
       {{"landscape", 1}, {"allocation", 2}, {"initial_configuration", 3}, {"hillclimb", 4}, {"bid_noise", 5},
        {"tie_break", 6}}},
  };

  nlohmann::ordered_json structures = nlohmann::ordered_json::object();
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < results.size(); ++c) {
    const ExperimentResult& r = results[c];
    structures[r.scenario.structure.label] = r.scenario.structure.matrix.pattern();
    nlohmann::ordered_json cell;
    cell["index"] = c;
    cell["cell"] = r.cell;
    cell["structure"] = r.scenario.structure.label;
    cell["incentive"] = r.scenario.incentive.label;
    cell["alpha"] = r.scenario.incentive.scheme.alpha;
    cell["beta"] = r.scenario.incentive.scheme.beta;
    cell["strategy"] = std::string(to_string(r.scenario.strategy));
    cell["seed"] = r.scenario.seed;
    cell["replication_seeds"] = r.replication_seeds;
    if (!r.mean.empty()) {
      cell["final_mean_norm_perf"] = r.mean.back();
      cell["final_ci99_half_width"] = r.ci_half_width.back();
    }
    cells.push_back(std::move(cell));
  }
  doc["interaction_patterns"] = structures;
  doc["cells"] = cells;
  return doc.dump(2) + "\n";
}

void write_summary(std::ostream& out, std::span<const ExperimentResult> results) {
  std::size_t width = 4;
  for (const ExperimentResult& r : results) width = std::max(width, r.cell.size());

  std::vector<std::size_t> checkpoints;
  const std::size_t horizon = results.empty() ? 0 : results.front().scenario.horizon;
  for (std::size_t t : {100, 250, 500}) {
    if (t <= horizon) checkpoints.push_back(t);
  }
  if (horizon && (checkpoints.empty() || checkpoints.back() != horizon)) checkpoints.push_back(horizon);

  fmt::print(out, "{:<{}}", "cell", width);
  for (std::size_t t : checkpoints) fmt::print(out, "  {:>8}", fmt::format("t={}", t));
  fmt::print(out, "  {:>10}\n", "ci99(T)");
  for (const ExperimentResult& r : results) {
    fmt::print(out, "{:<{}}", r.cell, width);
    for (std::size_t t : checkpoints) fmt::print(out, "  {:>8.4f}", r.mean[t - 1]);
    fmt::print(out, "  {:>10.4f}\n", r.ci_half_width.back());
  }
}

}  // namespace orgdesign
