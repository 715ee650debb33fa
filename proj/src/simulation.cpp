#include "orgdesign/simulation.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "orgdesign/errors.hpp"
#include "orgdesign/rng.hpp"

namespace orgdesign {

Structure stylized_structure(StructureKind kind, std::size_t n) {
  return {kind == StructureKind::kDecomposableK2 ? "k2" : "k5", build_stylized_matrix(kind, n)};
}

Structure file_structure(const std::filesystem::path& path) {
  return {"file:" + path.string(), InteractionMatrix::load(path)};
}

std::vector<std::string> validate(const ScenarioConfig& s) {
  std::vector<std::string> errors;
  const std::size_t n = s.decisions();
  if (n < 2) errors.push_back("n must be at least 2");
  if (n > kMaxEnumerableDecisions) {
    errors.push_back("n = " + std::to_string(n) + " exceeds the enumeration limit of " +
                     std::to_string(kMaxEnumerableDecisions));
  }
  if (s.agents == 0) {
    errors.push_back("m must be positive");
  } else if (n % s.agents != 0) {
    errors.push_back("n = " + std::to_string(n) + " is not divisible by m = " + std::to_string(s.agents));
  }
  if (s.capacities.size() != s.agents) {
    errors.push_back("need " + std::to_string(s.agents) + " capacities, got " + std::to_string(s.capacities.size()));
  } else if (s.agents > 0) {
    for (std::size_t a = 0; a < s.agents; ++a) {
      if (s.capacities[a] < n / s.agents) {
        errors.push_back("capacity of agent " + std::to_string(a) + " is below the initial share n/m = " +
                         std::to_string(n / s.agents));
      }
    }
  }
  const auto& w = s.incentive.scheme;
  if (!(w.alpha >= 0.0 && w.alpha <= 1.0) || !(w.beta >= 0.0 && w.beta <= 1.0)) {
    errors.push_back("alpha and beta must lie in [0,1]");
  }
  if (!(std::abs(w.alpha + w.beta - 1.0) <= 1e-12)) errors.push_back("alpha + beta must equal 1");
  if (s.agents == 1 && w.alpha != 1.0) errors.push_back("a single agent has no residual decisions; alpha must be 1");
  if (s.tau < 2) errors.push_back("tau must be at least 2");
  if (s.horizon < 1) errors.push_back("horizon T must be at least 1");
  if (s.replications < 1) errors.push_back("replications S must be at least 1");
  if (!(s.sigma >= 0.0) || !std::isfinite(s.sigma)) errors.push_back("sigma must be a finite value >= 0");
  return errors;
}

std::string cell_label(const ScenarioConfig& s) {
  std::string structure = s.structure.label;
  if (structure.rfind("file:", 0) == 0) {
    structure = "file:" + std::filesystem::path(structure.substr(5)).stem().string();
  }
  return structure + "/" + s.incentive.label + "/" + std::string(to_string(s.strategy));
}

ReplicationTrace run_replication(const ScenarioConfig& scenario, std::uint64_t seed,
                                 const ReplicationOptions& options) {
  if (auto errors = validate(scenario); !errors.empty()) throw ConfigError(errors.front());

  const std::size_t n = scenario.decisions();
  const std::size_t m = scenario.agents;
  const bool auctions = scenario.strategy != Strategy::kBenchmarkFixed;

  Rng landscape_rng = make_stream(seed, StreamRole::kLandscape);
  Rng allocation_rng = make_stream(seed, StreamRole::kAllocation);
  Rng config_rng = make_stream(seed, StreamRole::kInitialConfiguration);
  Rng hill_rng = make_stream(seed, StreamRole::kHillclimb);
  Rng noise_rng = make_stream(seed, StreamRole::kBidNoise);
  Rng tie_rng = make_stream(seed, StreamRole::kTieBreak);

  const Landscape landscape = Landscape::generate(scenario.structure.matrix, landscape_rng);
  Allocation allocation = auctions
                              ? initial_allocation(n, m, scenario.capacities, allocation_rng)
                              : mirrored_allocation(scenario.structure.matrix, m);
  Configuration config = Configuration::random(n, config_rng);

  std::vector<AgentState> agents;
  agents.reserve(m);
  for (std::size_t a = 0; a < m; ++a) agents.push_back({a, scenario.capacities[a], init_beliefs(n)});

  ReplicationTrace trace;
  trace.seed = seed;
  trace.optimum = landscape.optimum();
  trace.observations.assign(m, 0);
  trace.periods.reserve(scenario.horizon);

  auto fail = [&](std::size_t t, const std::string& what) -> InvariantViolation {
    return InvariantViolation("period " + std::to_string(t) + ": " + what);
  };

  for (std::size_t t = 1; t <= scenario.horizon; ++t) {
    PeriodRecord record;
    record.period = t;

    if (auctions && t % scenario.tau == 0) {
      if (options.record_beliefs) {
        for (const AgentState& agent : agents) trace.belief_snapshots.push_back({t, agent.id, agent.beliefs});
      }
      std::vector<Offer> offers;
      for (const AgentState& agent : agents) {
        const auto owned = allocation.owned(agent.id);
        std::optional<Offer> offer =
            scenario.strategy == Strategy::kUtilityBased
                ? select_offer_utility(agent.id, owned, landscape, config, tie_rng)
                : select_offer_interdependence(agent.id, owned, agent.beliefs, tie_rng);
        if (offer) offers.push_back(*offer);
      }

      BidFunction bid = [&](std::size_t bidder, const Offer& offer, const Allocation& running) {
        const auto owned = running.owned(bidder);
        if (scenario.strategy == Strategy::kUtilityBased) {
          return bid_utility(bidder, owned.size(), agents[bidder].capacity, offer, landscape, config,
                             scenario.sigma, noise_rng);
        }
        return bid_interdependence(bidder, owned, agents[bidder].capacity, agents[bidder].beliefs, offer);
      };

      ClearingResult cleared = clear_auction(offers, std::move(allocation), scenario.capacities, bid, t, tie_rng);
      allocation = std::move(cleared.allocation);
      record.trades = cleared.trades.size();
      trace.trades.insert(trace.trades.end(), cleared.trades.begin(), cleared.trades.end());
    } else {
      std::vector<AgentDecision> choices;
      choices.reserve(m);
      for (std::size_t a = 0; a < m; ++a) {
        const std::vector<std::size_t> residual = allocation.residual(a);
        choices.push_back(hillclimb_step(allocation.owned(a), residual, landscape, config,
                                         scenario.incentive.scheme, hill_rng));
      }
      Configuration next = assemble_configuration(n, choices);

      bool any_flip = false;
      for (const AgentDecision& c : choices) any_flip = any_flip || c.flipped.has_value();
      if (any_flip) {
        const std::vector<double> before = landscape.contributions(config);
        const std::vector<double> after = landscape.contributions(next);
        for (std::size_t a = 0; a < m; ++a) {
          if (!choices[a].flipped) continue;
          const std::size_t seen =
              update_beliefs(agents[a].beliefs, allocation.owned(a), *choices[a].flipped, before, after);
          trace.observations[a] += seen;
          record.observations += seen;
        }
      }
      config = std::move(next);
    }

    try {
      allocation.check(scenario.capacities);
    } catch (const InvariantViolation& e) {
      throw fail(t, e.what());
    }

    record.performance = landscape.performance(config);
    record.normalized = record.performance / trace.optimum.performance;
    if (!(record.normalized > 0.0 && record.normalized <= 1.0)) {
      throw fail(t, "normalized performance " + std::to_string(record.normalized) + " outside (0,1]");
    }
    record.owned_sizes = allocation.owned_sizes();
    trace.periods.push_back(std::move(record));
  }

  trace.final_beliefs.reserve(m);
  for (AgentState& agent : agents) {
    if (agent.beliefs.observations() != trace.observations[agent.id]) {
      throw fail(scenario.horizon, "belief counters of agent " + std::to_string(agent.id) +
                                       " do not match the observations processed");
    }
    trace.final_beliefs.push_back(std::move(agent.beliefs));
  }
  return trace;
}

SeriesSummary summarize(std::span<const std::vector<double>> series) {
  SeriesSummary out;
  if (series.empty()) return out;
  const std::size_t length = series.front().size();
  for (const auto& s : series) {
    if (s.size() != length) throw ContractViolation("summarize: series differ in length");
  }
  const std::size_t count = series.size();
  out.mean.assign(length, 0.0);
  out.ci_half_width.assign(length, 0.0);
  for (std::size_t t = 0; t < length; ++t) {
    // Welford; exact for identical values.
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t r = 0; r < count; ++r) {
      const double x = series[r][t];
      const double delta = x - mean;
      mean += delta / static_cast<double>(r + 1);
      m2 += delta * (x - mean);
    }
    out.mean[t] = mean;
    if (count > 1) {
      const double sd = std::sqrt(m2 / static_cast<double>(count - 1));
      out.ci_half_width[t] = kZ99 * sd / std::sqrt(static_cast<double>(count));
    }
  }
  return out;
}

ExperimentResult run_experiment(const ScenarioConfig& scenario, const ExperimentOptions& options) {
  if (auto errors = validate(scenario); !errors.empty()) throw ConfigError(errors.front());

  const std::size_t reps = scenario.replications;
  const std::size_t horizon = scenario.horizon;

  ExperimentResult result;
  result.scenario = scenario;
  result.cell = cell_label(scenario);
  result.replication_seeds.resize(reps);
  for (std::size_t r = 0; r < reps; ++r) result.replication_seeds[r] = replication_seed(scenario.seed, r);

  std::vector<std::vector<double>> series(reps);
  std::vector<ReplicationTrace> traces(options.keep_traces ? reps : 0);
  std::vector<std::exception_ptr> errors(reps);

  ReplicationOptions rep_options;
  rep_options.record_beliefs = options.record_beliefs;

  auto run_one = [&](std::size_t r) {
    try {
      ReplicationOptions opts = rep_options;
      opts.record_beliefs = opts.record_beliefs && r == 0;
      ReplicationTrace trace = run_replication(scenario, result.replication_seeds[r], opts);
      series[r].reserve(horizon);
      for (const PeriodRecord& p : trace.periods) series[r].push_back(p.normalized);
      if (options.keep_traces) traces[r] = std::move(trace);
    } catch (const InvariantViolation& e) {
      errors[r] = std::make_exception_ptr(
          InvariantViolation(result.cell + ", replication " + std::to_string(r) + ", " + e.what()));
    } catch (...) {
      errors[r] = std::current_exception();
    }
  };

  std::size_t jobs = options.jobs == 0 ? std::max(1U, std::thread::hardware_concurrency()) : options.jobs;
  jobs = std::min(jobs, reps);
  if (jobs <= 1) {
    for (std::size_t r = 0; r < reps; ++r) run_one(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t r = next++; r < reps; r = next++) run_one(r);
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SeriesSummary summary = summarize(series);
  result.mean = std::move(summary.mean);
  result.ci_half_width = std::move(summary.ci_half_width);
  result.traces = std::move(traces);
  return result;
}

GridAxes paper_grid_axes(std::size_t n) {
  GridAxes axes;
  axes.structures = {stylized_structure(StructureKind::kDecomposableK2, n),
                     stylized_structure(StructureKind::kNondecomposableK5, n)};
  axes.incentives = {{"individualistic", IncentiveScheme::individualistic()},
                     {"balanced", IncentiveScheme::balanced()},
                     {"altruistic", IncentiveScheme::altruistic()}};
  axes.strategies = {Strategy::kUtilityBased, Strategy::kInterdependenceBased, Strategy::kBenchmarkFixed};
  return axes;
}

std::vector<ScenarioConfig> expand_grid(const ScenarioConfig& base, const GridAxes& axes) {
  if (axes.structures.empty() || axes.incentives.empty() || axes.strategies.empty()) {
    throw ConfigError("grid axes must be non-empty");
  }
  std::vector<ScenarioConfig> cells;
  for (const Structure& structure : axes.structures) {
    for (const NamedIncentive& incentive : axes.incentives) {
      for (Strategy strategy : axes.strategies) {
        ScenarioConfig cell = base;
        cell.structure = structure;
        cell.incentive = incentive;
        cell.strategy = strategy;
        cell.seed = cell_seed(base.seed, cells.size());
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

std::vector<ExperimentResult> run_grid(const ScenarioConfig& base, const GridAxes& axes,
                                       const ExperimentOptions& options) {
  std::vector<ExperimentResult> results;
  for (const ScenarioConfig& cell : expand_grid(base, axes)) results.push_back(run_experiment(cell, options));
  return results;
}

}  // namespace orgdesign
