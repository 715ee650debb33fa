#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "orgdesign/scenario_file.hpp"
#include "orgdesign/simulation.hpp"

namespace orgdesign {

inline constexpr std::string_view kArtifactVersion = "1.0.0";

// cell,period,mean_norm_perf,ci99_half_width
void write_results_csv(std::ostream& out, std::span<const ExperimentResult> results);

// cell,replication,period,decision,seller,winner,winning_bid,price,strategy
// Needs results produced with keep_traces.
void write_trades_csv(std::ostream& out, std::span<const ExperimentResult> results);

// cell,replication,period,agent,i,j,p,q,belief for every recorded snapshot.
void write_beliefs_csv(std::ostream& out, std::span<const ExperimentResult> results);

// Scenario echo, seed ledger, interaction patterns and conventions.
std::string metadata_json(const RunSettings& run, std::span<const ExperimentResult> results);

// Mean normalized performance at t = 100, 250, 500 (those within the
// horizon) and at the final period, one line per cell.
void write_summary(std::ostream& out, std::span<const ExperimentResult> results);

}  // namespace orgdesign
