// orgdesign: run, validate and cross-check organizational design simulations.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "orgdesign/errors.hpp"
#include "orgdesign/oracle.hpp"
#include "orgdesign/output.hpp"
#include "orgdesign/scenario_file.hpp"
#include "orgdesign/simulation.hpp"

namespace fs = std::filesystem;
using namespace orgdesign;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

// Command-line flags that override scenario-file keys.
struct Overrides {
  std::map<std::string, std::string> values;

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>(
        "--" + flag, [this, key](const std::string& v) { values[key] = v; }, help);
  }

  void append_to(std::vector<Setting>& settings) const {
    for (const auto& [key, value] : values) settings.push_back({key, value, 0});
  }
};

void add_scenario_flags(CLI::App* app, Overrides& o) {
  o.add(app, "preset", "preset", "Scenario preset (paper-grid)");
  o.add(app, "structure", "structure", "k2 | k5 | file:<path>");
  o.add(app, "incentive", "incentive", "individualistic | balanced | altruistic | alpha=<v>");
  o.add(app, "strategy", "strategy", "utility | interdependence | benchmark");
  o.add(app, "reps", "reps", "Replications S");
  o.add(app, "horizon", "horizon", "Periods T");
  o.add(app, "tau", "tau", "Auction interval");
  o.add(app, "sigma", "sigma", "Std. dev. of utility-based bid noise");
  o.add(app, "capacity", "capacity", "Capacity per agent (one value or a comma list)");
  o.add(app, "seed", "seed", "Master seed");
  o.add(app, "jobs", "jobs", "Worker threads (0 = all cores)");
  o.add(app, "out", "out", "Output directory");
  o.add(app, "emit", "emit", "Comma list of csv,json,beliefs,trades");
}

std::optional<RunSettings> load_settings(const std::string& file, const Overrides& overrides,
                                         std::ostream& err) {
  std::vector<Setting> settings;
  try {
    if (!file.empty()) settings = load_scenario_file(file);
  } catch (const ParseError& e) {
    err << file << ": " << e.what() << '\n';
    return std::nullopt;
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return std::nullopt;
  }
  overrides.append_to(settings);
  ResolvedSettings resolved = resolve_settings(settings);
  if (!resolved.errors.empty()) {
    for (const auto& e : resolved.errors) err << (file.empty() ? "" : file + ": ") << e << '\n';
    return std::nullopt;
  }
  return std::move(resolved.settings);
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

int cmd_run(const std::string& file, const Overrides& overrides) {
  auto run = load_settings(file, overrides, std::cerr);
  if (!run) return kExitConfig;

  const std::vector<ScenarioConfig> cells =
      run->grid ? expand_grid(run->scenario, *run->grid) : std::vector<ScenarioConfig>{run->scenario};

  ExperimentOptions options;
  options.jobs = run->jobs;
  options.keep_traces = run->emit.count("trades") || run->emit.count("beliefs");
  options.record_beliefs = run->emit.count("beliefs") > 0;

  try {
    fs::create_directories(run->out_dir);
    std::optional<std::ofstream> csv, trades, beliefs;
    if (run->emit.count("csv")) csv = open_output(run->out_dir / "results.csv");
    if (run->emit.count("trades")) trades = open_output(run->out_dir / "trades.csv");
    if (run->emit.count("beliefs")) beliefs = open_output(run->out_dir / "beliefs.csv");

    std::vector<ExperimentResult> results;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      ExperimentResult result = run_experiment(cells[c], options);
      std::span<const ExperimentResult> one(&result, 1);
      // Headers only once: write the first cell with header, later cells without.
      auto emit = [&](std::ofstream& out, auto writer) {
        std::ostringstream buffer;
        writer(buffer, one);
        std::string text = buffer.str();
        if (c > 0) text.erase(0, text.find('\n') + 1);
        out << text;
      };
      if (csv) emit(*csv, write_results_csv);
      if (trades) emit(*trades, write_trades_csv);
      if (beliefs) emit(*beliefs, write_beliefs_csv);
      result.traces.clear();
      results.push_back(std::move(result));
    }
    if (run->emit.count("json")) open_output(run->out_dir / "metadata.json") << metadata_json(*run, results);
    write_summary(std::cout, results);
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

int cmd_validate(const std::string& file, const Overrides& overrides) {
  auto run = load_settings(file, overrides, std::cerr);
  if (!run) return kExitConfig;
  for (const Setting& s : to_settings(*run)) std::cout << s.key << " = " << s.value << '\n';
  return kExitOk;
}

int cmd_oracle(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (n > oracle::kMaxOracleDecisions || n == 0) {
    std::cerr << "oracle: n must be between 1 and " << oracle::kMaxOracleDecisions << ", got " << n << '\n';
    return kExitConfig;
  }
  if (k >= n) {
    std::cerr << "oracle: k must be below n\n";
    return kExitConfig;
  }
  Rng rng = make_stream(seed, StreamRole::kLandscape);
  const Landscape landscape = Landscape::generate(oracle::cyclic_matrix(n, k), rng);
  std::cout << "# oracle n=" << n << " k=" << k << " seed=" << seed << '\n';
  oracle::write_tables(std::cout, landscape, oracle::build_tables(landscape));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-based organizational design on NK landscapes"};
  app.require_subcommand(1);

  std::string run_file;
  Overrides run_overrides;
  CLI::App* run = app.add_subcommand("run", "Run one scenario or a scenario grid");
  run->add_option("scenario", run_file, "Scenario file (key = value lines)")->check(CLI::ExistingFile);
  add_scenario_flags(run, run_overrides);

  std::string validate_file;
  Overrides validate_overrides;
  CLI::App* validate = app.add_subcommand("validate", "Check a scenario file and print the effective settings");
  validate->add_option("scenario", validate_file, "Scenario file")->check(CLI::ExistingFile);
  add_scenario_flags(validate, validate_overrides);

  std::size_t oracle_n = 2;
  std::size_t oracle_k = 1;
  std::uint64_t oracle_seed = 1;
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Print brute-force reference tables for a small landscape");
  oracle_cmd->add_option("--n", oracle_n, "Decisions (at most 4)")->required();
  oracle_cmd->add_option("--k", oracle_k, "Dependencies per decision");
  oracle_cmd->add_option("--seed", oracle_seed, "Landscape seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*run) return cmd_run(run_file, run_overrides);
  if (*validate) return cmd_validate(validate_file, validate_overrides);
  return cmd_oracle(oracle_n, oracle_k, oracle_seed);
}
