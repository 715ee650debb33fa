#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "orgdesign/auction.hpp"
#include "orgdesign/landscape.hpp"
#include "orgdesign/learning.hpp"
#include "orgdesign/organization.hpp"

namespace orgdesign {

// z-value of the two-sided 99% normal interval.
inline constexpr double kZ99 = 2.576;

struct Structure {
  std::string label;  // "k2", "k5" or "file:<path>"
  InteractionMatrix matrix;

  friend bool operator==(const Structure&, const Structure&) = default;
};

Structure stylized_structure(StructureKind kind, std::size_t n);
Structure file_structure(const std::filesystem::path& path);

struct NamedIncentive {
  std::string label;
  IncentiveScheme scheme;

  friend bool operator==(const NamedIncentive&, const NamedIncentive&) = default;
};

struct ScenarioConfig {
  Structure structure = stylized_structure(StructureKind::kDecomposableK2, 15);
  std::size_t agents = 5;
  NamedIncentive incentive{"individualistic", IncentiveScheme::individualistic()};
  Strategy strategy = Strategy::kUtilityBased;
  std::size_t tau = 25;
  std::size_t horizon = 500;
  std::size_t replications = 800;
  double sigma = 0.05;
  std::vector<std::size_t> capacities = std::vector<std::size_t>(5, 5);
  std::uint64_t seed = 1;

  std::size_t decisions() const noexcept { return structure.matrix.size(); }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Every violated scenario invariant, empty when the scenario is runnable.
std::vector<std::string> validate(const ScenarioConfig& scenario);

// "structure/incentive/strategy".
std::string cell_label(const ScenarioConfig& scenario);

struct PeriodRecord {
  std::size_t period = 0;
  double performance = 0.0;
  double normalized = 0.0;
  std::vector<std::size_t> owned_sizes;
  std::size_t trades = 0;
  std::size_t observations = 0;  // belief observations processed this period
};

struct BeliefSnapshot {
  std::size_t period = 0;
  std::size_t agent = 0;
  BeliefCounters counters;
};

struct ReplicationTrace {
  std::uint64_t seed = 0;
  Optimum optimum;
  std::vector<PeriodRecord> periods;
  std::vector<TradeRecord> trades;
  std::vector<std::uint64_t> observations;  // per agent, cumulative
  std::vector<BeliefCounters> final_beliefs;
  std::vector<BeliefSnapshot> belief_snapshots;
};

struct ReplicationOptions {
  bool record_beliefs = false;  // snapshot counters at every auction period
};

// One simulation run. Auction periods (t mod tau = 0, unless the strategy is
// the fixed benchmark) only trade; every other period all agents hillclimb
// synchronously against the previous configuration and agents that moved
// update their beliefs. Throws InvariantViolation on a broken invariant.
ReplicationTrace run_replication(const ScenarioConfig& scenario, std::uint64_t seed,
                                 const ReplicationOptions& options = {});

struct ExperimentOptions {
  std::size_t jobs = 1;  // 0 uses the hardware concurrency
  bool keep_traces = false;
  // Belief snapshots are recorded for the first replication only.
  bool record_beliefs = false;
};

struct ExperimentResult {
  ScenarioConfig scenario;
  std::string cell;
  std::vector<std::uint64_t> replication_seeds;
  std::vector<double> mean;           // normalized performance per period
  std::vector<double> ci_half_width;  // 99% normal-approximation half-width
  std::vector<ReplicationTrace> traces;
};

struct SeriesSummary {
  std::vector<double> mean;
  std::vector<double> ci_half_width;
};

// Per-period mean and 99% half-width (kZ99 * sample sd / sqrt(S)) over
// equally long series, accumulated in series order. Half-width is 0 for a
// single series.
SeriesSummary summarize(std::span<const std::vector<double>> series);

// S replications seeded from scenario.seed, reduced in replication order so
// the result does not depend on `jobs`.
ExperimentResult run_experiment(const ScenarioConfig& scenario, const ExperimentOptions& options = {});

struct GridAxes {
  std::vector<Structure> structures;
  std::vector<NamedIncentive> incentives;
  std::vector<Strategy> strategies;
};

// The 2 structures x 3 incentive schemes x (2 strategies + benchmark) grid.
GridAxes paper_grid_axes(std::size_t n = 15);

// Cells in structure-major, then incentive, then strategy order; cell c runs
// with seed cell_seed(base.seed, c).
std::vector<ScenarioConfig> expand_grid(const ScenarioConfig& base, const GridAxes& axes);
std::vector<ExperimentResult> run_grid(const ScenarioConfig& base, const GridAxes& axes,
                                       const ExperimentOptions& options = {});

}  // namespace orgdesign
