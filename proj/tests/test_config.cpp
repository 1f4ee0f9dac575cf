#include <cmath>
#include <numbers>

#include "blockage/commands.hpp"
#include "blockage/config.hpp"
#include "doctest.h"

using namespace blockage;

TEST_CASE("defaults reproduce the reference parameter table") {
    const ScenarioConfig cfg = default_config();
    const CellScenario& s = cfg.scenario;
    CHECK(s.radius == 300.0);
    CHECK(s.bs_height == 40.0);
    CHECK(s.ue_height == 1.5);
    CHECK(s.relay_count == 3);
    CHECK(s.sectorized);
    CHECK(s.blockers.density == 1e-4);
    CHECK(s.blockers.length.upper() == 30.0);
    CHECK(s.blockers.orientation.is_uniform());
    CHECK(s.blockers.orientation.upper() == doctest::Approx(std::numbers::pi));
    CHECK(max_allowable_path_loss(s.budget_bs_rs) == doctest::Approx(138.2));
    CHECK(max_allowable_path_loss(s.budget_rs_ue) == doctest::Approx(122.5));
    CHECK(cfg.sweeps.lambdas == std::vector<double>{1e-4, 2.2e-4});
    CHECK(cfg.mc.trials == 100000);
}

TEST_CASE("parse overrides nested fields") {
    const char* text = R"({
      "cell": {"radius_m": 200.0, "relay_count": 2, "sectorized": false},
      "blockers": {
        "density_per_m2": 2.2e-4,
        "length": {"kind": "deterministic", "value_m": 15.0},
        "height": {"kind": "none"},
        "orientation": {"kind": "uniform", "max_deg": 180.0}
      },
      "budgets": {"rs_ue": {"tx_power_dbm": 18.0}},
      "quadrature": {"nodes_theta": 24},
      "mc": {"trials": 5000, "seed": 9},
      "sweeps": {"distance_m": {"start": 0, "stop": 200, "step": 100},
                 "lambdas_per_m2": [1e-4]}
    })";
    const ScenarioConfig cfg = parse_config(text);
    CHECK(cfg.scenario.radius == 200.0);
    CHECK(cfg.scenario.relay_count == 2);
    CHECK_FALSE(cfg.scenario.sectorized);
    CHECK(cfg.scenario.blockers.density == 2.2e-4);
    CHECK(cfg.scenario.blockers.length.is_deterministic());
    CHECK(cfg.scenario.blockers.length.upper() == 15.0);
    CHECK_FALSE(cfg.scenario.blockers.height.has_value());
    CHECK(cfg.scenario.budget_rs_ue.tx_power_dbm == 18.0);
    CHECK(cfg.scenario.budget_rs_ue.tx_gain_dbi == 23.0);  // default retained
    CHECK(cfg.quadrature.nodes_theta == 24);
    CHECK(cfg.mc.trials == 5000);
    CHECK(cfg.sweeps.distance.values() == std::vector<double>{0.0, 100.0, 200.0});
    CHECK(cfg.sweeps.lambdas == std::vector<double>{1e-4});
}

TEST_CASE("unknown keys and bad types are rejected with the offending path") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"cell": {"raduis_m": 300}})"),
                         doctest::Contains("raduis_m"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"cells": {}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"cell": {"radius_m": "big"}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"mc": {"trials": -5}})"), ConfigError);
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"blockers": {"length": {"kind": "gaussian"}}})"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"blockers": {"orientation": {"kind": "uniform", "max_deg": 90}}})"),
        ConfigError);  // uniform orientation must span [0, pi]
    CHECK_THROWS_AS(parse_config(R"({"cell": {"relay_radius_m": 400}})"),
                    ConfigError);
}

TEST_CASE("flag overrides take precedence over config values") {
    RunOptions opt;
    opt.seed = 77;
    opt.trials = 1234;
    opt.quad_nodes = 6;
    opt.no_budget = true;
    const ScenarioConfig cfg = apply_overrides(default_config(), opt);
    CHECK(cfg.mc.seed == 77);
    CHECK(cfg.mc.trials == 1234);
    CHECK(cfg.quadrature.nodes_l == 6);
    CHECK(cfg.quadrature.nodes_theta == 6);
    CHECK(cfg.quadrature.nodes_h == 3);
    CHECK_FALSE(cfg.scenario.use_budgets);
}

TEST_CASE("format_number uses plain decimal notation") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(3.0) == "3");
    CHECK(format_number(1e-4) == "0.0001");
}
