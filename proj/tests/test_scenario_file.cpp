#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "orgdesign/errors.hpp"
#include "orgdesign/scenario_file.hpp"

using namespace orgdesign;

namespace {

const std::string kData = ORGDESIGN_TEST_DATA;

std::vector<Setting> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario_text(in);
}

ResolvedSettings resolve(const std::string& text) { return resolve_settings(parse(text)); }

bool mentions(const std::vector<std::string>& errors, const std::string& needle) {
  return std::any_of(errors.begin(), errors.end(), [&](const std::string& e) { return e.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("scenario text syntax") {
  const auto settings = parse("# comment\n\n  tau = 30  # trailing\nstrategy=benchmark\n");
  REQUIRE(settings.size() == 2);
  CHECK(settings[0].key == "tau");
  CHECK(settings[0].value == "30");
  CHECK(settings[0].line == 3);
  CHECK(settings[1].key == "strategy");
  CHECK(settings[1].value == "benchmark");
  CHECK(settings[1].line == 4);

  try {
    parse("tau = 30\nhorizon 40\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("= 4\n"), ParseError);
  CHECK_THROWS_AS(load_scenario_file(kData + "/malformed.scenario"), ParseError);
  CHECK_THROWS_AS(load_scenario_file(kData + "/does-not-exist.scenario"), ConfigError);
}

TEST_CASE("defaults") {
  const auto r = resolve_settings({});
  CHECK(r.errors.empty());
  CHECK(r.settings.scenario == ScenarioConfig{});
  CHECK_FALSE(r.settings.grid);
  CHECK(r.settings.jobs == 1);
}

TEST_CASE("values are applied and later entries win") {
  const auto r = resolve("structure = k5\nincentive = altruistic\nstrategy = interdependence\ntau = 10\n"
                         "horizon = 90\nreps = 7\nsigma = 0.1\nseed = 99\ntau = 15\n");
  REQUIRE(r.errors.empty());
  const auto& s = r.settings.scenario;
  CHECK(s.structure.label == "k5");
  CHECK(s.structure.matrix == build_stylized_matrix(StructureKind::kNondecomposableK5, 15));
  CHECK(s.incentive.scheme == IncentiveScheme::altruistic());
  CHECK(s.strategy == Strategy::kInterdependenceBased);
  CHECK(s.tau == 15);
  CHECK(s.horizon == 90);
  CHECK(s.replications == 7);
  CHECK(s.sigma == 0.1);
  CHECK(s.seed == 99);
}

TEST_CASE("invalid settings are all reported") {
  const auto r = resolve_settings(load_scenario_file(kData + "/invalid.scenario"));
  CHECK(mentions(r.errors, "colour"));
  CHECK(mentions(r.errors, "tau"));
  CHECK(mentions(r.errors, "alpha"));
  CHECK(r.errors.size() >= 3);

  CHECK_FALSE(resolve("strategy = greedy\n").errors.empty());
  CHECK_FALSE(resolve("reps = -3\n").errors.empty());
  CHECK_FALSE(resolve("reps = 0\n").errors.empty());
  CHECK_FALSE(resolve("sigma = -0.1\n").errors.empty());
  CHECK_FALSE(resolve("m = 4\n").errors.empty());
  CHECK_FALSE(resolve("capacity = 2\n").errors.empty());
  CHECK_FALSE(resolve("m = 1\ncapacity = 15\nincentive = balanced\n").errors.empty());
  CHECK(resolve("m = 1\ncapacity = 15\nincentive = individualistic\n").errors.empty());
}

TEST_CASE("incentive weights") {
  auto r = resolve("alpha = 0.6\n");
  REQUIRE(r.errors.empty());
  CHECK(r.settings.scenario.incentive.scheme.alpha == 0.6);
  CHECK(r.settings.scenario.incentive.scheme.beta == doctest::Approx(0.4));
  CHECK(r.settings.scenario.incentive.label == "alpha=0.6");
  r = resolve("alpha = 0.3\nbeta = 0.7\n");
  CHECK(r.errors.empty());
  CHECK(parse_incentive("balanced").scheme == IncentiveScheme::balanced());
  CHECK(parse_incentive("alpha=0.25").scheme.alpha == 0.25);
  CHECK_THROWS_AS(parse_incentive("selfish"), ConfigError);
}

TEST_CASE("capacities") {
  auto r = resolve("capacity = 4\n");
  REQUIRE(r.errors.empty());
  CHECK(r.settings.scenario.capacities == std::vector<std::size_t>(5, 4));
  r = resolve("capacity = 3,4,5,6,7\n");
  REQUIRE(r.errors.empty());
  CHECK(r.settings.scenario.capacities == std::vector<std::size_t>{3, 4, 5, 6, 7});
  CHECK_FALSE(resolve("capacity = 3,4\n").errors.empty());
}

TEST_CASE("structures from files") {
  auto r = resolve("structure = file:" + kData + "/chain6.txt\nm = 3\ncapacity = 3\n");
  REQUIRE(r.errors.empty());
  CHECK(r.settings.scenario.decisions() == 6);
  CHECK(r.settings.scenario.structure.matrix.depends(5, 0));
  CHECK(cell_label(r.settings.scenario) == "file:chain6/individualistic/utility");
  r = resolve("structure = file:" + kData + "/chain6.txt\nn = 9\nm = 3\ncapacity = 3\n");
  CHECK(mentions(r.errors, "n = 9"));
  r = resolve("structure = file:" + kData + "/valid.scenario\n");
  CHECK_FALSE(r.errors.empty());
  r = resolve("structure = k2\nn = 10\n");
  CHECK_FALSE(r.errors.empty());
}

TEST_CASE("grid preset") {
  auto r = resolve("preset = paper-grid\nreps = 2\n");
  REQUIRE(r.errors.empty());
  REQUIRE(r.settings.grid);
  CHECK(expand_grid(r.settings.scenario, *r.settings.grid).size() == 18);
  r = resolve("preset = paper-grid\ngrid.strategies = utility, benchmark\ngrid.structures = k5\n");
  REQUIRE(r.errors.empty());
  CHECK(expand_grid(r.settings.scenario, *r.settings.grid).size() == 6);
  CHECK_FALSE(resolve("preset = everything\n").errors.empty());
}

TEST_CASE("settings echo resolves to the same run") {
  for (const std::string& text : std::vector<std::string>
       {"", "structure = k5\nincentive = balanced\nstrategy = benchmark\nreps = 3\nseed = 12\n",
        "alpha = 0.35\ncapacity = 3,3,3,3,4\nsigma = 0.2\nout = elsewhere\nemit = csv\njobs = 3\n",
        "preset = paper-grid\ngrid.incentives = individualistic, alpha=0.8\n",
        "structure = file:" + kData + "/chain6.txt\nm = 2\ncapacity = 3\n"}) {
    CAPTURE(text);
    const auto first = resolve(text);
    REQUIRE(first.errors.empty());
    const auto again = resolve_settings(to_settings(first.settings));
    REQUIRE(again.errors.empty());
    CHECK(again.settings.scenario == first.settings.scenario);
    CHECK(again.settings.out_dir == first.settings.out_dir);
    CHECK(again.settings.emit == first.settings.emit);
    CHECK(again.settings.jobs == first.settings.jobs);
    CHECK(again.settings.grid.has_value() == first.settings.grid.has_value());
    if (first.settings.grid) {
      CHECK(again.settings.grid->structures == first.settings.grid->structures);
      CHECK(again.settings.grid->incentives == first.settings.grid->incentives);
      CHECK(again.settings.grid->strategies == first.settings.grid->strategies);
    }
  }
}
