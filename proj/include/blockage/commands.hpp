#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "blockage/config.hpp"

namespace blockage {

// Command-line overrides; precedence is flag > config > default.
struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<int> quad_nodes;
    bool no_budget = false;
    bool independent = false;
};

ScenarioConfig apply_overrides(ScenarioConfig cfg, const RunOptions& opt);

// Locale-independent "%.10g" rendering used for all CSV payloads.
std::string format_number(double value);

// Single-link blockage vs distance, analytic and Monte Carlo, per density.
void run_single(const ScenarioConfig& cfg, const RunOptions& opt,
                std::ostream& csv);

// Cell-average single-link blockage over density and building height.
void run_density(const ScenarioConfig& cfg, std::ostream& csv);

// Per-azimuth failure probability profile with relays.
void run_sector_profile(const ScenarioConfig& cfg, std::ostream& csv);

// Relay ring sweep; CSV table plus a JSON summary with both argmins and the
// no-relay baseline.
void run_optimize(const ScenarioConfig& cfg, std::ostream& csv,
                  std::ostream& summary);

// Analytic-vs-Monte-Carlo validation harness; writes a JSON report and one
// human-readable pass/fail line per check to `log`. Returns 0 when every
// check is within 3 standard errors (and consistency identities hold), 3
// otherwise.
int run_validate(const ScenarioConfig& cfg, std::ostream& report,
                 std::ostream& log);

}  // namespace blockage
