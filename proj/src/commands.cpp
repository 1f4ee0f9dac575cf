#include "blockage/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "blockage/errors.hpp"
#include "blockage/mc.hpp"
#include "json.hpp"

namespace blockage {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Analytic single-link blockage; falls back to the quadrature route when the
// closed form does not cover the orientation law.
double analytic_p_blocked(const Link& link, const ShapeDistribution& dist,
                          const QuadratureSpec& quad) {
    try {
        return p_blocked(link, dist);
    } catch (const UnsupportedDistributionError&) {
        const Link links[] = {link};
        return -std::expm1(-expected_blockers_union(links, dist, quad));
    }
}

// Cell average of the single-link blockage by radial quadrature of f_D.
double mean_single_link_by_quadrature(double radius,
                                      const ShapeDistribution& dist,
                                      double bs_height, double ue_height,
                                      const QuadratureSpec& quad) {
    std::vector<double> gx, gw;
    detail::gauss_legendre_nodes(64, gx, gw);
    double mean = 0.0;
    for (std::size_t i = 0; i < gx.size(); ++i) {
        const double d = 0.5 * radius * (1.0 + gx[i]);
        const Link link{{0.0, 0.0}, {d, 0.0}, bs_height, ue_height};
        const double p = analytic_p_blocked(link, dist, quad);
        mean += 0.5 * radius * gw[i] * p * 2.0 * d / (radius * radius);
    }
    return mean;
}

double mean_single_link_any(const ScenarioConfig& cfg,
                            const ShapeDistribution& dist) {
    try {
        return mean_single_link_blockage(cfg.scenario.radius, dist,
                                         cfg.scenario.bs_height,
                                         cfg.scenario.ue_height);
    } catch (const UnsupportedDistributionError&) {
        return mean_single_link_by_quadrature(cfg.scenario.radius, dist,
                                              cfg.scenario.bs_height,
                                              cfg.scenario.ue_height,
                                              cfg.quadrature);
    }
}

void csv_line(std::ostream& out, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out << ',';
        out << format_number(v);
        first = false;
    }
    out << '\n';
}

}  // namespace

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

ScenarioConfig apply_overrides(ScenarioConfig cfg, const RunOptions& opt) {
    if (opt.seed) cfg.mc.seed = *opt.seed;
    if (opt.trials) {
        if (*opt.trials == 0) throw ConfigError("--trials must be >= 1");
        cfg.mc.trials = *opt.trials;
    }
    if (opt.quad_nodes) {
        if (*opt.quad_nodes < 1) throw ConfigError("--quad-nodes must be >= 1");
        cfg.quadrature.nodes_l = *opt.quad_nodes;
        cfg.quadrature.nodes_w = *opt.quad_nodes;
        cfg.quadrature.nodes_theta = *opt.quad_nodes;
        cfg.quadrature.nodes_h = std::max(2, *opt.quad_nodes / 2);
    }
    if (opt.no_budget) cfg.scenario.use_budgets = false;
    return cfg;
}

void run_single(const ScenarioConfig& cfg, const RunOptions& opt,
                std::ostream& csv) {
    csv << "d_m,p_analytic,p_mc,mc_stderr,lambda_per_m2";
    if (opt.independent) csv << ",p_independent";
    csv << '\n';
    const std::vector<double> distances = cfg.sweeps.distance.values();
    std::uint64_t row = 0;
    for (double lambda : cfg.sweeps.lambdas) {
        ShapeDistribution dist = cfg.scenario.blockers;
        dist.density = lambda;
        dist.validate();
        for (double d : distances) {
            const Link link{{0.0, 0.0}, {d, 0.0}, cfg.scenario.bs_height,
                            cfg.scenario.ue_height};
            const double p = analytic_p_blocked(link, dist, cfg.quadrature);
            const Link links[] = {link};
            const Estimate est = estimate_p_all_blocked(
                LinkSet{{link}, {}}, dist, default_sample_region(links, dist),
                cfg.mc.trials, substream_seed(cfg.mc.seed, 0x510000 + row));
            if (opt.independent)
                csv_line(csv, {d, p, est.p_hat, est.std_error, lambda, p});
            else
                csv_line(csv, {d, p, est.p_hat, est.std_error, lambda});
            ++row;
        }
    }
}

void run_density(const ScenarioConfig& cfg, std::ostream& csv) {
    csv << "lambda,hmax_m,mean_p_closed_form,mean_p_quadrature\n";
    for (double lambda : cfg.sweeps.lambdas) {
        for (double hmax : cfg.sweeps.hmax) {
            ShapeDistribution dist = cfg.scenario.blockers;
            dist.density = lambda;
            dist.height = ScalarDist::uniform(hmax);
            dist.validate();
            const double closed = mean_single_link_any(cfg, dist);
            const double quad = mean_single_link_by_quadrature(
                cfg.scenario.radius, dist, cfg.scenario.bs_height,
                cfg.scenario.ue_height, cfg.quadrature);
            csv_line(csv, {lambda, hmax, closed, quad});
        }
    }
}

void run_sector_profile(const ScenarioConfig& cfg, std::ostream& csv) {
    csv << "d_m,phi_deg,p_correlated,p_independent,p_mc,mc_stderr\n";
    const CellScenario& s = cfg.scenario;
    const std::vector<double> distances = cfg.sweeps.distance.values();
    std::uint64_t row = 0;
    for (double phi_deg : cfg.sweeps.azimuths_deg) {
        for (double d : distances) {
            const UserPosition u{d, phi_deg * kDegToRad};
            const double p_corr = failure_prob_at(u, s, cfg.quadrature);
            const double p_ind =
                failure_prob_at_independent(u, s, cfg.quadrature);
            const CandidatePaths cp = candidate_paths(u, s);
            std::vector<std::uint32_t> active;
            for (std::size_t p = 0; p < cp.paths.size(); ++p)
                if (!s.use_budgets || cp.path_feasible[p])
                    active.push_back(cp.paths[p]);
            double p_mc = 1.0, mc_stderr = 0.0;
            if (!active.empty()) {
                const Estimate est = estimate_p_all_paths_blocked(
                    cp.links, active, cp.clear_mask, s.blockers,
                    default_sample_region(cp.links, s.blockers), cfg.mc.trials,
                    substream_seed(cfg.mc.seed, 0x5EC000 + row));
                p_mc = est.p_hat;
                mc_stderr = est.std_error;
            }
            csv_line(csv, {d, phi_deg, p_corr, p_ind, p_mc, mc_stderr});
            ++row;
        }
    }
}

void run_optimize(const ScenarioConfig& cfg, std::ostream& csv,
                  std::ostream& summary) {
    const std::vector<double> r_grid = cfg.sweeps.relay_radius.values();
    const std::vector<double>& h_grid = cfg.sweeps.relay_heights;
    const OptimizeResult result =
        optimize_relays(cfg.scenario, r_grid, h_grid, cfg.quadrature,
                        cfg.radial_nodes, cfg.azimuth_nodes);
    const double baseline = mean_single_link_any(cfg, cfg.scenario.blockers);

    csv << "r_m,h_R_m,p_blocking_only,p_with_budget,p_no_relay\n";
    for (const OptimizeResult::Row& row : result.table)
        csv_line(csv, {row.relay_radius, row.relay_height, row.p_blocking_only,
                       row.p_with_budget, baseline});

    nlohmann::json j;
    j["blocking_only"] = {
        {"relay_radius_m", result.best_blocking_only.relay_radius},
        {"relay_height_m", result.best_blocking_only.relay_height},
        {"avg_failure", result.best_blocking_only.failure}};
    j["with_budget"] = {
        {"relay_radius_m", result.best_with_budget.relay_radius},
        {"relay_height_m", result.best_with_budget.relay_height},
        {"avg_failure", result.best_with_budget.failure}};
    j["no_relay_closed_form"] = baseline;
    summary << j.dump(2) << '\n';
}

int run_validate(const ScenarioConfig& cfg, std::ostream& report,
                 std::ostream& log) {
    nlohmann::json checks = nlohmann::json::array();
    bool all_pass = true;
    double max_z = 0.0;

    auto log_check = [&log](const nlohmann::json& c) {
        log << (c.at("pass").get<bool>() ? "[PASS] " : "[FAIL] ")
            << c.at("name").get<std::string>();
        for (const char* key : {"lambda_per_m2", "d_m", "phi_deg"})
            if (c.contains(key))
                log << ' ' << key << '=' << format_number(c.at(key).get<double>());
        if (c.contains("z")) log << " z=" << format_number(c.at("z").get<double>());
        if (c.contains("abs_diff"))
            log << " abs_diff=" << format_number(c.at("abs_diff").get<double>());
        if (c.contains("max_abs_diff"))
            log << " max_abs_diff="
                << format_number(c.at("max_abs_diff").get<double>());
        log << '\n';
    };

    auto z_score = [](double analytic, const Estimate& est) {
        const double diff = std::abs(analytic - est.p_hat);
        if (est.std_error > 0.0) return diff / est.std_error;
        return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    };

    const std::vector<double> distances = cfg.sweeps.distance.values();
    std::uint64_t row = 0;

    // Single-link: analytic blockage against the Monte Carlo oracle.
    for (double lambda : cfg.sweeps.lambdas) {
        ShapeDistribution dist = cfg.scenario.blockers;
        dist.density = lambda;
        dist.validate();
        for (double d : distances) {
            const Link link{{0.0, 0.0}, {d, 0.0}, cfg.scenario.bs_height,
                            cfg.scenario.ue_height};
            const double p = analytic_p_blocked(link, dist, cfg.quadrature);
            const Link links[] = {link};
            const Estimate est = estimate_p_all_blocked(
                LinkSet{{link}, {}}, dist, default_sample_region(links, dist),
                cfg.mc.trials, substream_seed(cfg.mc.seed, 0xA11000 + row));
            const double z = z_score(p, est);
            const bool pass = z <= 3.0;
            checks.push_back({{"name", "single_link_mc"},
                              {"lambda_per_m2", lambda},
                              {"d_m", d},
                              {"analytic", p},
                              {"mc", est.p_hat},
                              {"stderr", est.std_error},
                              {"z", z},
                              {"pass", pass}});
            log_check(checks.back());
            max_z = std::max(max_z, z);
            all_pass = all_pass && pass;
            ++row;
        }
    }

    // Joint failure with relays: correlated analytic against Monte Carlo.
    if (cfg.scenario.relay_count > 0) {
        for (double phi_deg : cfg.sweeps.azimuths_deg) {
            for (double d : distances) {
                const UserPosition u{d, phi_deg * kDegToRad};
                const double p = failure_prob_at(u, cfg.scenario, cfg.quadrature);
                const CandidatePaths cp = candidate_paths(u, cfg.scenario);
                std::vector<std::uint32_t> active;
                for (std::size_t pth = 0; pth < cp.paths.size(); ++pth)
                    if (!cfg.scenario.use_budgets || cp.path_feasible[pth])
                        active.push_back(cp.paths[pth]);
                double z = 0.0;
                Estimate est;
                if (active.empty()) {
                    est.p_hat = 1.0;
                    z = p == 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
                } else {
                    est = estimate_p_all_paths_blocked(
                        cp.links, active, cp.clear_mask, cfg.scenario.blockers,
                        default_sample_region(cp.links, cfg.scenario.blockers),
                        cfg.mc.trials, substream_seed(cfg.mc.seed, 0xB22000 + row));
                    z = z_score(p, est);
                }
                const bool pass = z <= 3.0;
                checks.push_back({{"name", "joint_failure_mc"},
                                  {"phi_deg", phi_deg},
                                  {"d_m", d},
                                  {"analytic", p},
                                  {"mc", est.p_hat},
                                  {"stderr", est.std_error},
                                  {"z", z},
                                  {"pass", pass}});
                log_check(checks.back());
                max_z = std::max(max_z, z);
                all_pass = all_pass && pass;
                ++row;
            }
        }
    }

    // Internal consistency: closed-form cell mean vs radial quadrature.
    {
        ShapeDistribution dist = cfg.scenario.blockers;
        dist.validate();
        bool closed_form_applies = true;
        double closed = 0.0;
        try {
            closed = mean_single_link_blockage(cfg.scenario.radius, dist,
                                               cfg.scenario.bs_height,
                                               cfg.scenario.ue_height);
        } catch (const UnsupportedDistributionError&) {
            closed_form_applies = false;
        }
        if (closed_form_applies) {
            const double quad = mean_single_link_by_quadrature(
                cfg.scenario.radius, dist, cfg.scenario.bs_height,
                cfg.scenario.ue_height, cfg.quadrature);
            const double diff = std::abs(closed - quad);
            const bool pass = diff <= 1e-6;
            checks.push_back({{"name", "mean_closed_vs_quadrature"},
                              {"closed_form", closed},
                              {"quadrature", quad},
                              {"abs_diff", diff},
                              {"pass", pass}});
            log_check(checks.back());
            all_pass = all_pass && pass;
        }
    }

    // Height factors against dense numeric integration of the cdf.
    {
        std::mt19937_64 gen(12345);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        double max_diff = 0.0;
        for (int k = 0; k < 60; ++k) {
            const double hmax = 5.0 + 45.0 * u01(gen);
            const double h1 = 50.0 * u01(gen);
            const double h0 = k % 10 == 0 ? h1 : h1 + 50.0 * u01(gen);
            const ScalarDist height = ScalarDist::uniform(hmax);
            const double eta =
                sweep_height_factor(h0, h1, std::optional<ScalarDist>(height));
            double eta_ref;
            if (h0 == h1) {
                eta_ref = 1.0 - height.cdf(h0);
            } else {
                const int steps = 200000;
                double integral = 0.5 * (height.cdf(h1) + height.cdf(h0));
                for (int i = 1; i < steps; ++i)
                    integral += height.cdf(h1 + (h0 - h1) * i / steps);
                integral *= (h0 - h1) / steps;
                eta_ref = 1.0 - integral / (h0 - h1);
            }
            max_diff = std::max(max_diff, std::abs(eta - eta_ref));
            const double mu =
                footprint_height_factor(h1, std::optional<ScalarDist>(height));
            max_diff = std::max(max_diff, std::abs(mu - (1.0 - height.cdf(h1))));
        }
        const bool pass = max_diff <= 1e-10;
        checks.push_back({{"name", "height_factor_identity"},
                          {"max_abs_diff", max_diff},
                          {"pass", pass}});
        log_check(checks.back());
        all_pass = all_pass && pass;
    }

    nlohmann::json j;
    j["checks"] = checks;
    j["max_z"] = max_z;
    j["all_pass"] = all_pass;
    report << j.dump(2) << '\n';
    return all_pass ? 0 : 3;
}

}  // namespace blockage
