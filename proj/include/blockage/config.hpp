#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blockage/cell.hpp"
#include "blockage/errors.hpp"

namespace blockage {

struct McSettings {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
};

struct RangeSweep {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    std::vector<double> values() const;
};

struct Sweeps {
    RangeSweep distance{0.0, 300.0, 50.0};
    std::vector<double> lambdas{1e-4, 2.2e-4};
    std::vector<double> hmax{30.0, 40.0};
    std::vector<double> azimuths_deg{0.0, 15.0, 30.0};
    RangeSweep relay_radius{10.0, 290.0, 10.0};
    std::vector<double> relay_heights{20.0};
};

// Everything a CLI run needs: scenario, quadrature, Monte Carlo settings and
// the sweep definitions. Angles in files are degrees; internal units are
// radians, meters, Hz, dBm, dBi.
struct ScenarioConfig {
    CellScenario scenario;
    QuadratureSpec quadrature;
    int radial_nodes = 24;
    int azimuth_nodes = 8;
    McSettings mc;
    Sweeps sweeps;
};

// Built-in defaults (the reference simulation parameter table).
ScenarioConfig default_config();

// Strict parse: unknown keys and wrong types raise ConfigError with the
// offending path in the message.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config_file(const std::string& path);

}  // namespace blockage
