#include "orgdesign/scenario_file.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "orgdesign/errors.hpp"

namespace orgdesign {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <typename T>
std::optional<T> parse_number(const std::string& text) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::string where(const Setting& s) {
  return s.line ? "line " + std::to_string(s.line) + ": " : "--" + s.key + ": ";
}

std::string format_double(double v) { return fmt::format("{}", v); }

}  // namespace

const std::vector<std::string>& known_setting_keys() {
  static const std::vector<std::string> keys = {
      "preset", "n",     "m",    "structure", "incentive", "alpha",           "beta",
      "strategy", "tau", "horizon", "reps",   "sigma",     "capacity",        "seed",
      "jobs",   "out",   "emit", "grid.structures", "grid.incentives", "grid.strategies"};
  return keys;
}

std::vector<Setting> parse_scenario_text(std::istream& in) {
  std::vector<Setting> settings;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    Setting s{trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)), line_no};
    if (s.key.empty()) throw ParseError(line_no, "missing key before '='");
    if (s.value.empty()) throw ParseError(line_no, "missing value for '" + s.key + "'");
    settings.push_back(std::move(s));
  }
  return settings;
}

std::vector<Setting> load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  return parse_scenario_text(in);
}

Strategy parse_strategy(const std::string& text) {
  if (text == "utility") return Strategy::kUtilityBased;
  if (text == "interdependence") return Strategy::kInterdependenceBased;
  if (text == "benchmark") return Strategy::kBenchmarkFixed;
  throw ConfigError("unknown strategy '" + text + "' (utility|interdependence|benchmark)");
}

NamedIncentive parse_incentive(const std::string& text) {
  if (text == "individualistic") return {text, IncentiveScheme::individualistic()};
  if (text == "balanced") return {text, IncentiveScheme::balanced()};
  if (text == "altruistic") return {text, IncentiveScheme::altruistic()};
  if (text.rfind("alpha=", 0) == 0) {
    auto alpha = parse_number<double>(text.substr(6));
    if (!alpha) throw ConfigError("bad alpha value in '" + text + "'");
    return {"alpha=" + format_double(*alpha), {*alpha, 1.0 - *alpha}};
  }
  throw ConfigError("unknown incentive '" + text + "' (individualistic|balanced|altruistic|alpha=<v>)");
}

Structure parse_structure(const std::string& text, std::size_t n) {
  if (text == "k2") return stylized_structure(StructureKind::kDecomposableK2, n);
  if (text == "k5") return stylized_structure(StructureKind::kNondecomposableK5, n);
  if (text.rfind("file:", 0) == 0) {
    try {
      return file_structure(text.substr(5));
    } catch (const ParseError& e) {
      throw ConfigError(text.substr(5) + ": " + e.what());
    }
  }
  throw ConfigError("unknown structure '" + text + "' (k2|k5|file:<path>)");
}

ResolvedSettings resolve_settings(const std::vector<Setting>& settings) {
  ResolvedSettings out;
  auto& errors = out.errors;
  RunSettings& run = out.settings;
  ScenarioConfig& sc = run.scenario;

  const auto& keys = known_setting_keys();
  std::map<std::string, Setting> last;
  for (const Setting& s : settings) {
    if (std::find(keys.begin(), keys.end(), s.key) == keys.end()) {
      errors.push_back(where(s) + "unknown key '" + s.key + "'");
      continue;
    }
    last[s.key] = s;
  }
  auto get = [&](const std::string& key) -> const Setting* {
    auto it = last.find(key);
    return it == last.end() ? nullptr : &it->second;
  };

  auto read_count = [&](const std::string& key, std::size_t fallback) -> std::size_t {
    const Setting* s = get(key);
    if (!s) return fallback;
    if (auto v = parse_number<std::size_t>(s->value)) return *v;
    errors.push_back(where(*s) + key + " must be a non-negative integer, got '" + s->value + "'");
    return fallback;
  };
  auto read_double = [&](const std::string& key, double fallback) -> double {
    const Setting* s = get(key);
    if (!s) return fallback;
    if (auto v = parse_number<double>(s->value)) return *v;
    errors.push_back(where(*s) + key + " must be a number, got '" + s->value + "'");
    return fallback;
  };

  // Problem size and structure.
  std::size_t n = read_count("n", 15);
  std::string structure_text = "k2";
  if (const Setting* s = get("structure")) structure_text = s->value;
  try {
    sc.structure = parse_structure(structure_text, n);
    if (get("n") && sc.structure.matrix.size() != n) {
      errors.push_back(where(*get("n")) + "n = " + std::to_string(n) + " does not match the " +
                       std::to_string(sc.structure.matrix.size()) + " decisions of " + structure_text);
    }
    n = sc.structure.matrix.size();
  } catch (const std::exception& e) {
    const Setting* s = get("structure") ? get("structure") : get("n");
    errors.push_back((s ? where(*s) : std::string()) + e.what());
  }

  sc.agents = read_count("m", 5);
  sc.tau = read_count("tau", 25);
  sc.horizon = read_count("horizon", 500);
  sc.replications = read_count("reps", 800);
  sc.sigma = read_double("sigma", 0.05);
  run.jobs = read_count("jobs", 1);
  if (const Setting* s = get("seed")) {
    if (auto v = parse_number<std::uint64_t>(s->value)) {
      sc.seed = *v;
    } else {
      errors.push_back(where(*s) + "seed must be an unsigned 64-bit integer");
    }
  }

  // Capacities: one value for all agents, or one per agent.
  sc.capacities.assign(sc.agents, 5);
  if (const Setting* s = get("capacity")) {
    std::vector<std::size_t> caps;
    bool ok = true;
    for (const auto& item : split_list(s->value)) {
      auto v = parse_number<std::size_t>(item);
      if (!v) ok = false;
      else caps.push_back(*v);
    }
    if (!ok || caps.empty()) {
      errors.push_back(where(*s) + "capacity must be a count or a comma-separated list of counts");
    } else if (caps.size() == 1) {
      sc.capacities.assign(sc.agents, caps.front());
    } else {
      sc.capacities = caps;
    }
  }

  if (const Setting* s = get("strategy")) {
    try {
      sc.strategy = parse_strategy(s->value);
    } catch (const ConfigError& e) {
      errors.push_back(where(*s) + e.what());
    }
  }

  if (const Setting* s = get("incentive")) {
    try {
      sc.incentive = parse_incentive(s->value);
    } catch (const ConfigError& e) {
      errors.push_back(where(*s) + e.what());
    }
  }
  if (get("alpha") || get("beta")) {
    double alpha = read_double("alpha", 1.0);
    double beta = read_double("beta", 0.0);
    if (!get("beta")) beta = 1.0 - alpha;
    if (!get("alpha")) alpha = 1.0 - beta;
    sc.incentive = {"alpha=" + format_double(alpha), {alpha, beta}};
  }

  if (const Setting* s = get("out")) run.out_dir = s->value;
  if (const Setting* s = get("emit")) {
    run.emit.clear();
    for (const auto& item : split_list(s->value)) {
      if (item == "csv" || item == "json" || item == "beliefs" || item == "trades") {
        run.emit.insert(item);
      } else {
        errors.push_back(where(*s) + "unknown emit target '" + item + "' (csv,json,beliefs,trades)");
      }
    }
  }

  // Grid axes: a preset first, then explicit axis lists.
  if (const Setting* s = get("preset")) {
    run.preset = s->value;
    if (s->value == "paper-grid") {
      run.grid = paper_grid_axes(n);
    } else {
      errors.push_back(where(*s) + "unknown preset '" + s->value + "' (paper-grid)");
    }
  }
  const Setting* gs = get("grid.structures");
  const Setting* gi = get("grid.incentives");
  const Setting* gt = get("grid.strategies");
  if (gs || gi || gt) {
    GridAxes axes = run.grid.value_or(GridAxes{{sc.structure}, {sc.incentive}, {sc.strategy}});
    auto axis = [&](const Setting* s, auto& target, auto parse) {
      if (!s) return;
      target.clear();
      for (const auto& item : split_list(s->value)) {
        try {
          target.push_back(parse(item));
        } catch (const ConfigError& e) {
          errors.push_back(where(*s) + e.what());
        }
      }
      if (target.empty()) errors.push_back(where(*s) + "axis is empty");
    };
    axis(gs, axes.structures, [&](const std::string& t) { return parse_structure(t, n); });
    axis(gi, axes.incentives, [](const std::string& t) { return parse_incentive(t); });
    axis(gt, axes.strategies, [](const std::string& t) { return parse_strategy(t); });
    run.grid = std::move(axes);
  }

  // Scenario invariants, for the base scenario or every grid cell.
  {
    std::vector<ScenarioConfig> cells;
    if (run.grid) {
      try {
        cells = expand_grid(sc, *run.grid);
      } catch (const ConfigError& e) {
        errors.push_back(e.what());
      }
    } else {
      cells.push_back(sc);
    }
    for (const ScenarioConfig& cell : cells) {
      for (const std::string& e : validate(cell)) {
        const std::string msg = run.grid ? cell_label(cell) + ": " + e : e;
        if (std::find(errors.begin(), errors.end(), msg) == errors.end()) errors.push_back(msg);
      }
    }
  }
  return out;
}

std::vector<Setting> to_settings(const RunSettings& run) {
  const ScenarioConfig& sc = run.scenario;
  std::vector<Setting> out;
  auto add = [&](std::string key, std::string value) { out.push_back({std::move(key), std::move(value), 0}); };
  auto join = [](const auto& items, auto fmt_item) {
    std::string s;
    for (const auto& item : items) {
      if (!s.empty()) s += ",";
      s += fmt_item(item);
    }
    return s;
  };

  add("structure", sc.structure.label);
  add("n", std::to_string(sc.decisions()));
  add("m", std::to_string(sc.agents));
  if (sc.incentive.label.rfind("alpha=", 0) == 0) {
    add("alpha", format_double(sc.incentive.scheme.alpha));
    add("beta", format_double(sc.incentive.scheme.beta));
  } else {
    add("incentive", sc.incentive.label);
  }
  add("strategy", std::string(to_string(sc.strategy)));
  add("tau", std::to_string(sc.tau));
  add("horizon", std::to_string(sc.horizon));
  add("reps", std::to_string(sc.replications));
  add("sigma", format_double(sc.sigma));
  add("capacity", join(sc.capacities, [](std::size_t c) { return std::to_string(c); }));
  add("seed", std::to_string(sc.seed));
  add("jobs", std::to_string(run.jobs));
  add("out", run.out_dir.string());
  add("emit", join(run.emit, [](const std::string& e) { return e; }));
  if (!run.preset.empty()) add("preset", run.preset);
  if (run.grid) {
    add("grid.structures", join(run.grid->structures, [](const Structure& s) { return s.label; }));
    add("grid.incentives", join(run.grid->incentives, [](const NamedIncentive& i) { return i.label; }));
    add("grid.strategies", join(run.grid->strategies, [](Strategy s) { return std::string(to_string(s)); }));
  }
  return out;
}

}  // namespace orgdesign
