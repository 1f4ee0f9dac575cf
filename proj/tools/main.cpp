#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "blockage/commands.hpp"
#include "blockage/errors.hpp"

namespace {

struct CliState {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    int quad_nodes = 0;
    bool no_budget = false;
    bool independent = false;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* trials_opt = nullptr;
    CLI::Option* quad_opt = nullptr;
};

void add_common_options(CLI::App* cmd, CliState& st) {
    cmd->add_option("--config", st.config_path, "JSON scenario config file");
    cmd->add_option("--out", st.out_path, "output file path");
    st.seed_opt = cmd->add_option("--seed", st.seed, "Monte Carlo master seed");
    st.trials_opt =
        cmd->add_option("--trials", st.trials, "Monte Carlo trials per point");
    st.quad_opt = cmd->add_option("--quad-nodes", st.quad_nodes,
                                  "override quadrature node count");
    cmd->add_flag("--no-budget", st.no_budget,
                  "disable sensitivity/link-budget constraints");
    cmd->add_flag("--independent", st.independent,
                  "emit the independence-assumption baseline");
}

blockage::RunOptions options_from(const CliState& st) {
    blockage::RunOptions opt;
    if (st.seed_opt && st.seed_opt->count() > 0) opt.seed = st.seed;
    if (st.trials_opt && st.trials_opt->count() > 0) opt.trials = st.trials;
    if (st.quad_opt && st.quad_opt->count() > 0) opt.quad_nodes = st.quad_nodes;
    opt.no_budget = st.no_budget;
    opt.independent = st.independent;
    return opt;
}

int open_output(const std::string& path, std::ofstream& stream) {
    stream.open(path);
    if (!stream) {
        std::cerr << "error: cannot write " << path << "\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Blockage analysis and relay placement for mmWave cells: analytic "
        "(stochastic-geometry) and Monte Carlo link failure probabilities."};
    app.require_subcommand(1);

    CliState st;
    CLI::App* single = app.add_subcommand(
        "single", "single-link blockage probability vs distance (CSV)");
    add_common_options(single, st);
    CLI::App* density = app.add_subcommand(
        "density", "cell-average blockage vs blocker density and height (CSV)");
    add_common_options(density, st);
    CLI::App* sector = app.add_subcommand(
        "sector-profile",
        "failure probability vs distance per user azimuth, with relays (CSV)");
    add_common_options(sector, st);
    CLI::App* optimize = app.add_subcommand(
        "optimize", "relay ring sweep and argmin placement (CSV + summary)");
    add_common_options(optimize, st);
    CLI::App* validate = app.add_subcommand(
        "validate", "analytic-vs-Monte-Carlo validation report (JSON)");
    add_common_options(validate, st);

    CLI11_PARSE(app, argc, argv);

    blockage::ScenarioConfig cfg;
    try {
        cfg = st.config_path.empty()
                  ? blockage::default_config()
                  : blockage::load_config_file(st.config_path);
        cfg = blockage::apply_overrides(cfg, options_from(st));
    } catch (const blockage::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    const blockage::RunOptions opt = options_from(st);
    try {
        if (single->parsed()) {
            std::ofstream out;
            if (int rc = open_output(
                    st.out_path.empty() ? "single.csv" : st.out_path, out))
                return rc;
            blockage::run_single(cfg, opt, out);
        } else if (density->parsed()) {
            std::ofstream out;
            if (int rc = open_output(
                    st.out_path.empty() ? "density.csv" : st.out_path, out))
                return rc;
            blockage::run_density(cfg, out);
        } else if (sector->parsed()) {
            std::ofstream out;
            if (int rc = open_output(
                    st.out_path.empty() ? "sector_profile.csv" : st.out_path,
                    out))
                return rc;
            blockage::run_sector_profile(cfg, out);
        } else if (optimize->parsed()) {
            std::ofstream out;
            if (int rc = open_output(
                    st.out_path.empty() ? "optimize.csv" : st.out_path, out))
                return rc;
            blockage::run_optimize(cfg, out, std::cout);
        } else if (validate->parsed()) {
            if (!st.out_path.empty()) {
                std::ofstream out;
                if (int rc = open_output(st.out_path, out)) return rc;
                return blockage::run_validate(cfg, out, std::cerr);
            }
            return blockage::run_validate(cfg, std::cout, std::cerr);
        }
    } catch (const blockage::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
