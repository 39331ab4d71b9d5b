#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "etac/errors.hpp"
#include "etac/scenario_io.hpp"
#include "etac/triggers.hpp"
#include "test_support.hpp"

using namespace etac;
using namespace etac::test;

namespace {

ScenarioConfig parse_text(const std::string& text, const LoadOptions& opts = {}) {
  std::istringstream in(text);
  return parse_scenario(in, "inline", opts);
}

const char* kMinimal =
    "agents 2\n"
    "mode event\n"
    "horizon 5\n"
    "sigma 0.5\n"
    "x0 1 0\n"
    "edge 1 2 1\n"
    "edge 2 1 1\n";

}  // namespace

TEST_CASE("bundled scenarios load with the documented setups") {
  const ScenarioConfig fig2 = load_scenario(scenario_path("fig2.scenario"));
  CHECK(fig2.name == "fig2");
  CHECK(fig2.n == 5);
  CHECK(fig2.graphs.size() == 1);
  CHECK(fig2.graphs.front().edges().size() == 7);
  CHECK(fig2.graphs.front() == fig2_graph());
  CHECK(fig2.x0 == fig_x0());
  CHECK(fig2.sigma == Vector(5, 0.999));
  CHECK(fig2.mode == RunMode::EventDriven);
  CHECK(fig2.horizon == 50.0);
  CHECK(!fig2.h);
  CHECK(fig2.cooldown);

  const ScenarioConfig fig1 = load_scenario(scenario_path("fig1.scenario"));
  CHECK(fig1.graphs.front() == fig1_graph());

  const ScenarioConfig fig3 = load_scenario(scenario_path("fig3.scenario"));
  CHECK(fig3.mode == RunMode::PeriodicEvent);
  CHECK(fig3.h == 0.1);
  CHECK(fig3.sigma == Vector(5, 0.5));

  const ScenarioConfig sw = load_scenario(scenario_path("switching.scenario"));
  CHECK(sw.graphs.size() == 2);
  CHECK(sw.schedule.size() == 200);  // dwell 1.0 out to horizon 200
  CHECK(sw.schedule.front() == std::pair{0.0, 0});
  CHECK(sw.schedule[1] == std::pair{1.0, 1});
  CHECK(sw.schedule[2] == std::pair{2.0, 0});
  CHECK_FALSE(is_strongly_connected(sw.graphs[0]));
  CHECK_FALSE(is_strongly_connected(sw.graphs[1]));
}

TEST_CASE("schema errors carry the offending line") {
  CHECK_THROWS_WITH_AS(parse_text("agents 2\nbogus 1\n"), doctest::Contains("line 2"),
                       SchemaError);
  CHECK_THROWS_WITH_AS(parse_text("agents two\n"), doctest::Contains("expected an integer"),
                       SchemaError);
  CHECK_THROWS_WITH_AS(parse_text("agents 2\nx0 1\nmode event\nhorizon 5\nsigma 0.5\n"),
                       doctest::Contains("x0 needs 2"), SchemaError);
  CHECK_THROWS_AS(parse_text("agents 2\nagents 3\n"), SchemaError);
  CHECK_THROWS_WITH_AS(parse_text("agents 2\nmode sideways\n"), doctest::Contains("unknown mode"),
                       SchemaError);
}

TEST_CASE("validation names the violated invariant") {
  // missing pieces
  CHECK_THROWS_WITH_AS(parse_text("mode event\n"), doctest::Contains("agents"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_text("agents 2\nmode event\nhorizon 5\nsigma 0.5\nedge 1 2 1\n"),
                       doctest::Contains("x0"), ValidationError);

  // graph problems, reported with 1-based ids
  CHECK_THROWS_WITH_AS(
      parse_text("agents 2\nmode event\nhorizon 5\nsigma 0.5\nx0 1 0\n"
                 "edge 1 2 1\nedge 1 2 2\nedge 2 1 1\n"),
      doctest::Contains("duplicate edge (1,2)"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_text("agents 2\nmode event\nhorizon 5\nsigma 0.5\nx0 1 0\n"
                                  "edge 1 1 1\nedge 2 1 1\n"),
                       doctest::Contains("self-loop"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_text("agents 3\nmode event\nhorizon 5\nsigma 0.5\nx0 1 0 2\n"
                                  "edge 1 2 1\nedge 2 1 1\n"),
                       doctest::Contains("strongly connected"), ValidationError);

  // sigma and epsilon bounds
  CHECK_THROWS_WITH_AS(parse_text("agents 2\nmode event\nhorizon 5\nsigma 1.2\nx0 1 0\n"
                                  "edge 1 2 1\nedge 2 1 1\n"),
                       doctest::Contains("(0,1)"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_text("agents 2\nmode event\nhorizon 5\nsigma 0.5\n"
                                  "epsilon 0.9\nx0 1 0\nedge 1 2 1\nedge 2 1 1\n"),
                       doctest::Contains("sqrt(sigma_i"), ValidationError);

  // mode/period consistency
  CHECK_THROWS_WITH_AS(parse_text(std::string(kMinimal) + "h 0.1\n"),
                       doctest::Contains("periodic"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_text("agents 2\nmode periodic-event\nhorizon 5\nsigma 0.5\n"
                                  "x0 1 0\nedge 1 2 1\nedge 2 1 1\n"),
                       doctest::Contains("requires a sampling period"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_text(std::string(kMinimal) + "zeno_ceiling 0\n"),
                       doctest::Contains("zeno_ceiling"), ValidationError);
}

TEST_CASE("weight-balance violations report the failing vertex and respect the override") {
  const std::string unbalanced =
      "agents 2\nmode event\nhorizon 5\nsigma 0.5\nx0 1 0\n"
      "edge 1 2 1\nedge 2 1 0.25\n";
  CHECK_THROWS_WITH_AS(parse_text(unbalanced), doctest::Contains("vertex"), ValidationError);
  LoadOptions relaxed;
  relaxed.allow_unbalanced = true;
  const ScenarioConfig cfg = parse_text(unbalanced, relaxed);
  CHECK(cfg.n == 2);
}

TEST_CASE("switching schedules") {
  const std::string two_graphs =
      "agents 3\nmode event\nhorizon 4\nsigma 0.5\nx0 1 0 2\n"
      "graph\nedge 1 2 1\nedge 2 1 1\n"
      "graph\nedge 2 3 1\nedge 3 2 1\n";

  SUBCASE("explicit schedule") {
    const ScenarioConfig cfg = parse_text(two_graphs + "schedule 0:1 1.5:2 3:1\n");
    CHECK(cfg.schedule ==
          std::vector<std::pair<double, int>>{{0.0, 0}, {1.5, 1}, {3.0, 0}});
  }
  SUBCASE("cycling dwell") {
    const ScenarioConfig cfg = parse_text(two_graphs + "cycle_dwell 1\n");
    CHECK(cfg.schedule ==
          std::vector<std::pair<double, int>>{{0.0, 0}, {1.0, 1}, {2.0, 0}, {3.0, 1}});
  }
  SUBCASE("schedule must start at zero and increase") {
    CHECK_THROWS_AS(parse_text(two_graphs + "schedule 1:1 2:2\n"), ValidationError);
    CHECK_THROWS_AS(parse_text(two_graphs + "schedule 0:1 0:2\n"), ValidationError);
    CHECK_THROWS_AS(parse_text(two_graphs + "schedule 0:1 1:3\n"), SchemaError);
    CHECK_THROWS_AS(parse_text(two_graphs + "schedule 0:1 1:2\ncycle_dwell 1\n"), SchemaError);
    CHECK_THROWS_AS(parse_text(two_graphs), ValidationError);  // no schedule at all
  }
  SUBCASE("jointly disconnected unions are rejected") {
    const std::string disjoint =
        "agents 4\nmode event\nhorizon 4\nsigma 0.5\nx0 1 0 2 1\n"
        "graph\nedge 1 2 1\nedge 2 1 1\n"
        "graph\nedge 3 4 1\nedge 4 3 1\n";
    CHECK_THROWS_WITH_AS(parse_text(disjoint + "cycle_dwell 1\n"), doctest::Contains("union"),
                         ValidationError);
  }
}

TEST_CASE("load-time overrides are validated like file content") {
  LoadOptions lo;
  lo.sigma = 0.25;
  lo.horizon = 9.0;
  const ScenarioConfig cfg = parse_text(kMinimal, lo);
  CHECK(cfg.sigma == Vector(2, 0.25));
  CHECK(cfg.horizon == 9.0);

  LoadOptions bad_sigma;
  bad_sigma.sigma = 1.5;
  CHECK_THROWS_AS(parse_text(kMinimal, bad_sigma), ValidationError);

  // switching the mode to event drops a file-level h
  LoadOptions to_event;
  to_event.mode = RunMode::EventDriven;
  const ScenarioConfig fig3 = load_scenario(scenario_path("fig3.scenario"), to_event);
  CHECK(fig3.mode == RunMode::EventDriven);
  CHECK(!fig3.h);

  LoadOptions to_periodic;
  to_periodic.mode = RunMode::PeriodicLaplacian;
  to_periodic.h = 0.1;
  const ScenarioConfig fig1 = load_scenario(scenario_path("fig1.scenario"), to_periodic);
  CHECK(fig1.mode == RunMode::PeriodicLaplacian);
  CHECK(fig1.h == 0.1);
}

TEST_CASE("per-agent sigma and epsilon lists") {
  const ScenarioConfig cfg = parse_text(
      "agents 2\nmode event\nhorizon 5\nsigma 0.5 0.25\nepsilon 0.1 0.05\nx0 1 0\n"
      "edge 1 2 1\nedge 2 1 1\n");
  CHECK(cfg.sigma == Vector{0.5, 0.25});
  REQUIRE(cfg.epsilon.has_value());
  CHECK(*cfg.epsilon == Vector{0.1, 0.05});
}

TEST_CASE("canonical save/load round trip") {
  SUBCASE("bundled scenarios") {
    for (const char* name :
         {"fig1.scenario", "fig2.scenario", "fig3.scenario", "switching.scenario"}) {
      const ScenarioConfig cfg = load_scenario(scenario_path(name));
      std::istringstream in(scenario_text(cfg));
      const ScenarioConfig again = parse_scenario(in, cfg.name);
      CHECK(again == cfg);
    }
  }

  SUBCASE("random configurations with full-precision values") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 60; ++trial) {
      const int n = std::uniform_int_distribution<int>(2, 7)(rng);
      ScenarioConfig cfg;
      cfg.name = "rt" + std::to_string(trial);
      cfg.n = n;
      const int graphs = 1 + (trial % 3 == 0 ? 1 : 0);
      for (int k = 0; k < graphs; ++k) cfg.graphs.push_back(random_balanced_graph(rng, n));
      cfg.schedule.emplace_back(0.0, 0);
      if (graphs == 2) cfg.schedule.emplace_back(std::uniform_real_distribution<double>(
                                                     0.3, 3.0)(rng), 1);
      cfg.x0 = random_vector(rng, n, -3.0, 3.0);
      cfg.sigma.resize(n);
      for (double& s : cfg.sigma) s = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
      if (trial % 2 == 0) {
        Vector eps(n);
        for (int i = 0; i < n; ++i)
          eps[i] = 0.9 * epsilon_upper_bound(i, cfg.graphs, cfg.sigma[i]);
        cfg.epsilon = eps;
      }
      cfg.horizon = std::uniform_real_distribution<double>(1.0, 40.0)(rng);
      if (graphs == 1 && trial % 5 == 0) {
        cfg.mode = RunMode::PeriodicEvent;
        cfg.h = std::uniform_real_distribution<double>(0.001, 0.1)(rng);
      }
      cfg.sample_dt = 0.01;
      cfg.cooldown = trial % 4 != 0;
      cfg.zeno_ceiling = 1e5;

      std::istringstream in(scenario_text(cfg));
      const ScenarioConfig again = parse_scenario(in, cfg.name);
      CHECK(again == cfg);
    }
  }
}
