#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "orgdesign/simulation.hpp"

namespace orgdesign {

// One `key = value` entry. `line` is the 1-based line in a scenario file, or
// 0 for command-line overrides.
struct Setting {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

// Everything a run needs: the base scenario, optional grid axes and output
// options.
struct RunSettings {
  ScenarioConfig scenario;
  std::optional<GridAxes> grid;
  std::string preset;
  std::filesystem::path out_dir = "results";
  std::set<std::string> emit = {"csv", "json"};
  std::size_t jobs = 1;
};

// Keys accepted in scenario files and as overrides.
const std::vector<std::string>& known_setting_keys();

// Line-oriented `key = value` text; `#` starts a comment. Throws ParseError
// naming the line on malformed syntax.
std::vector<Setting> parse_scenario_text(std::istream& in);
std::vector<Setting> load_scenario_file(const std::filesystem::path& path);

struct ResolvedSettings {
  RunSettings settings;
  std::vector<std::string> errors;  // all problems found, empty when usable
};

// Applies settings in order over the defaults (later entries win) and checks
// every scenario invariant. Unknown keys and bad values are reported, never
// thrown.
ResolvedSettings resolve_settings(const std::vector<Setting>& settings);

// Settings that resolve back to `run` (scenario echo).
std::vector<Setting> to_settings(const RunSettings& run);

Strategy parse_strategy(const std::string& text);
NamedIncentive parse_incentive(const std::string& text);
Structure parse_structure(const std::string& text, std::size_t n);

}  // namespace orgdesign
