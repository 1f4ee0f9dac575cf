#include "blockage/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace blockage {

namespace {

using nlohmann::json;

constexpr double kDegToRad = std::numbers::pi / 180.0;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config error at " + path + ": " + what);
}

void require_object(const json& j, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known) fail(path, "unknown key '" + item.key() + "'");
    }
}

double get_number(const json& j, const std::string& path, const char* key,
                  double fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

std::uint64_t get_u64(const json& j, const std::string& path, const char* key,
                      std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_unsigned()) fail(path + "." + key, "expected a count");
    return v.get<std::uint64_t>();
}

int get_int(const json& j, const std::string& path, const char* key,
            int fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

bool get_bool(const json& j, const std::string& path, const char* key,
              bool fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_boolean()) fail(path + "." + key, "expected a boolean");
    return v.get<bool>();
}

std::vector<double> get_number_list(const json& j, const std::string& path,
                                    const char* key,
                                    std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_array()) fail(path + "." + key, "expected an array of numbers");
    std::vector<double> out;
    for (const json& item : v) {
        if (!item.is_number())
            fail(path + "." + key, "expected an array of numbers");
        out.push_back(item.get<double>());
    }
    if (out.empty()) fail(path + "." + key, "array must not be empty");
    return out;
}

// {"kind":"uniform","max_m":X} | {"kind":"deterministic","value_m":X};
// degrees variant for the orientation. "none" is allowed only for the height.
ScalarDist parse_scalar_dist(const json& j, const std::string& path,
                             bool degrees) {
    if (degrees)
        require_object(j, path, {"kind", "max_deg", "value_deg"});
    else
        require_object(j, path, {"kind", "max_m", "value_m"});
    if (!j.contains("kind")) fail(path, "missing 'kind'");
    const std::string kind = j.at("kind").is_string()
                                 ? j.at("kind").get<std::string>()
                                 : std::string();
    const char* max_key = degrees ? "max_deg" : "max_m";
    const char* value_key = degrees ? "value_deg" : "value_m";
    const double scale = degrees ? kDegToRad : 1.0;
    if (kind == "uniform") {
        if (!j.contains(max_key))
            fail(path, std::string("uniform needs '") + max_key + "'");
        return ScalarDist::uniform(scale *
                                   get_number(j, path, max_key, 0.0));
    }
    if (kind == "deterministic") {
        if (!j.contains(value_key))
            fail(path, std::string("deterministic needs '") + value_key + "'");
        return ScalarDist::deterministic(scale *
                                         get_number(j, path, value_key, 0.0));
    }
    fail(path, "kind must be 'uniform' or 'deterministic'");
}

void parse_blockers(const json& j, const std::string& path,
                    ShapeDistribution& dist) {
    require_object(j, path,
                   {"density_per_m2", "length", "width", "height", "orientation"});
    dist.density = get_number(j, path, "density_per_m2", dist.density);
    if (dist.density < 0.0) fail(path + ".density_per_m2", "must be >= 0");
    if (j.contains("length"))
        dist.length = parse_scalar_dist(j.at("length"), path + ".length", false);
    if (j.contains("width"))
        dist.width = parse_scalar_dist(j.at("width"), path + ".width", false);
    if (j.contains("height")) {
        const json& h = j.at("height");
        if (h.is_object() && h.contains("kind") && h.at("kind").is_string() &&
            h.at("kind").get<std::string>() == "none") {
            require_object(h, path + ".height", {"kind"});
            dist.height.reset();
        } else {
            dist.height = parse_scalar_dist(h, path + ".height", false);
        }
    }
    if (j.contains("orientation"))
        dist.orientation =
            parse_scalar_dist(j.at("orientation"), path + ".orientation", true);
}

void parse_budget(const json& j, const std::string& path, LinkBudget& budget) {
    require_object(j, path,
                   {"tx_power_dbm", "tx_gain_dbi", "rx_gain_dbi",
                    "sensitivity_dbm", "frequency_hz", "pathloss_exponent"});
    budget.tx_power_dbm = get_number(j, path, "tx_power_dbm", budget.tx_power_dbm);
    budget.tx_gain_dbi = get_number(j, path, "tx_gain_dbi", budget.tx_gain_dbi);
    budget.rx_gain_dbi = get_number(j, path, "rx_gain_dbi", budget.rx_gain_dbi);
    budget.sensitivity_dbm =
        get_number(j, path, "sensitivity_dbm", budget.sensitivity_dbm);
    budget.frequency_hz = get_number(j, path, "frequency_hz", budget.frequency_hz);
    budget.pathloss_exponent =
        get_number(j, path, "pathloss_exponent", budget.pathloss_exponent);
}

RangeSweep parse_range(const json& j, const std::string& path,
                       RangeSweep fallback) {
    require_object(j, path, {"start", "stop", "step"});
    RangeSweep out = fallback;
    out.start = get_number(j, path, "start", out.start);
    out.stop = get_number(j, path, "stop", out.stop);
    out.step = get_number(j, path, "step", out.step);
    if (!(out.step > 0.0)) fail(path + ".step", "must be > 0");
    if (out.stop < out.start) fail(path, "stop must be >= start");
    return out;
}

}  // namespace

std::vector<double> RangeSweep::values() const {
    std::vector<double> out;
    const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9));
    for (int i = 0; i <= count; ++i) out.push_back(start + i * step);
    return out;
}

ScenarioConfig default_config() {
    ScenarioConfig cfg;
    CellScenario& s = cfg.scenario;
    s.radius = 300.0;
    s.bs_height = 40.0;
    s.ue_height = 1.5;
    s.relay_count = 3;
    s.relay_radius = 180.0;
    s.relay_height = 20.0;
    s.sectorized = true;
    s.bs_relay_los_assumed = false;
    s.use_budgets = true;
    s.blockers.density = 1e-4;
    s.blockers.length = ScalarDist::uniform(30.0);
    s.blockers.width = ScalarDist::uniform(30.0);
    s.blockers.height = ScalarDist::uniform(30.0);
    s.blockers.orientation = ScalarDist::uniform(std::numbers::pi);
    // Gain accounting per class: the BS-RS budget counts the BS beamforming
    // gain but not the relay receive gain, the RS-UE budget counts the relay
    // transmit gain, and the direct BS-UE link is served without the
    // beamforming gain.
    s.budget_bs_ue = LinkBudget{25.0, 0.0, 0.0, -79.5, 28e9, 2.3};
    s.budget_bs_rs = LinkBudget{25.0, 23.0, 0.0, -90.2, 28e9, 2.3};
    s.budget_rs_ue = LinkBudget{20.0, 23.0, 0.0, -79.5, 28e9, 2.3};
    return cfg;
}

ScenarioConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ScenarioConfig cfg = default_config();
    require_object(j, "$",
                   {"cell", "blockers", "budgets", "quadrature", "cell_average",
                    "mc", "sweeps"});

    if (j.contains("cell")) {
        const json& c = j.at("cell");
        require_object(c, "cell",
                       {"radius_m", "bs_height_m", "ue_height_m", "relay_count",
                        "relay_radius_m", "relay_height_m", "sectorized",
                        "bs_relay_los_assumed", "use_budgets"});
        CellScenario& s = cfg.scenario;
        s.radius = get_number(c, "cell", "radius_m", s.radius);
        s.bs_height = get_number(c, "cell", "bs_height_m", s.bs_height);
        s.ue_height = get_number(c, "cell", "ue_height_m", s.ue_height);
        s.relay_count = get_int(c, "cell", "relay_count", s.relay_count);
        s.relay_radius = get_number(c, "cell", "relay_radius_m", s.relay_radius);
        s.relay_height = get_number(c, "cell", "relay_height_m", s.relay_height);
        s.sectorized = get_bool(c, "cell", "sectorized", s.sectorized);
        s.bs_relay_los_assumed =
            get_bool(c, "cell", "bs_relay_los_assumed", s.bs_relay_los_assumed);
        s.use_budgets = get_bool(c, "cell", "use_budgets", s.use_budgets);
    }
    if (j.contains("blockers"))
        parse_blockers(j.at("blockers"), "blockers", cfg.scenario.blockers);
    if (j.contains("budgets")) {
        const json& b = j.at("budgets");
        require_object(b, "budgets", {"bs_ue", "bs_rs", "rs_ue"});
        if (b.contains("bs_ue"))
            parse_budget(b.at("bs_ue"), "budgets.bs_ue", cfg.scenario.budget_bs_ue);
        if (b.contains("bs_rs"))
            parse_budget(b.at("bs_rs"), "budgets.bs_rs", cfg.scenario.budget_bs_rs);
        if (b.contains("rs_ue"))
            parse_budget(b.at("rs_ue"), "budgets.rs_ue", cfg.scenario.budget_rs_ue);
    }
    if (j.contains("quadrature")) {
        const json& q = j.at("quadrature");
        require_object(q, "quadrature",
                       {"nodes_l", "nodes_w", "nodes_h", "nodes_theta"});
        cfg.quadrature.nodes_l = get_int(q, "quadrature", "nodes_l", cfg.quadrature.nodes_l);
        cfg.quadrature.nodes_w = get_int(q, "quadrature", "nodes_w", cfg.quadrature.nodes_w);
        cfg.quadrature.nodes_h = get_int(q, "quadrature", "nodes_h", cfg.quadrature.nodes_h);
        cfg.quadrature.nodes_theta =
            get_int(q, "quadrature", "nodes_theta", cfg.quadrature.nodes_theta);
    }
    if (j.contains("cell_average")) {
        const json& a = j.at("cell_average");
        require_object(a, "cell_average", {"radial_nodes", "azimuth_nodes"});
        cfg.radial_nodes = get_int(a, "cell_average", "radial_nodes", cfg.radial_nodes);
        cfg.azimuth_nodes =
            get_int(a, "cell_average", "azimuth_nodes", cfg.azimuth_nodes);
    }
    if (j.contains("mc")) {
        const json& m = j.at("mc");
        require_object(m, "mc", {"trials", "seed"});
        cfg.mc.trials = get_u64(m, "mc", "trials", cfg.mc.trials);
        cfg.mc.seed = get_u64(m, "mc", "seed", cfg.mc.seed);
        if (cfg.mc.trials == 0) fail("mc.trials", "must be >= 1");
    }
    if (j.contains("sweeps")) {
        const json& s = j.at("sweeps");
        require_object(s, "sweeps",
                       {"distance_m", "lambdas_per_m2", "hmax_m", "azimuths_deg",
                        "relay_radius_m", "relay_heights_m"});
        if (s.contains("distance_m"))
            cfg.sweeps.distance =
                parse_range(s.at("distance_m"), "sweeps.distance_m", cfg.sweeps.distance);
        cfg.sweeps.lambdas = get_number_list(s, "sweeps", "lambdas_per_m2",
                                             cfg.sweeps.lambdas);
        cfg.sweeps.hmax = get_number_list(s, "sweeps", "hmax_m", cfg.sweeps.hmax);
        cfg.sweeps.azimuths_deg =
            get_number_list(s, "sweeps", "azimuths_deg", cfg.sweeps.azimuths_deg);
        if (s.contains("relay_radius_m"))
            cfg.sweeps.relay_radius = parse_range(
                s.at("relay_radius_m"), "sweeps.relay_radius_m", cfg.sweeps.relay_radius);
        cfg.sweeps.relay_heights = get_number_list(s, "sweeps", "relay_heights_m",
                                                   cfg.sweeps.relay_heights);
    }

    try {
        cfg.scenario.validate();
        cfg.quadrature.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }
    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace blockage
