// Acceptance suite: one pass/fail line per criterion. Criterion numbers can
// be given as arguments to run a subset; the exit code is the failure count.

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "blockage/cell.hpp"
#include "blockage/config.hpp"
#include "blockage/mc.hpp"
#include "support/oracles.hpp"

using namespace blockage;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegToRad = kPi / 180.0;

ShapeDistribution table_blockers(double density, double hmax = 30.0) {
    ShapeDistribution dist;
    dist.density = density;
    dist.length = ScalarDist::uniform(30.0);
    dist.width = ScalarDist::uniform(30.0);
    dist.height = ScalarDist::uniform(hmax);
    dist.orientation = ScalarDist::uniform(kPi);
    return dist;
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

// ---------------------------------------------------------------------------
// 1. Link-budget reproduction: 138.2 dB (BS-RS) and 122.5 dB (RS-UE).
Outcome criterion1() {
    const ScenarioConfig cfg = default_config();
    const double br = max_allowable_path_loss(cfg.scenario.budget_bs_rs);
    const double ru = max_allowable_path_loss(cfg.scenario.budget_rs_ue);
    Outcome out;
    out.pass = std::abs(br - 138.2) <= 0.05 && std::abs(ru - 122.5) <= 0.05;
    std::ostringstream ss;
    ss << "BS-RS " << br << " dB, RS-UE " << ru << " dB";
    out.detail = ss.str();
    return out;
}

// ---------------------------------------------------------------------------
// 2. Closed-form cell mean vs radial quadrature of the per-distance formula,
//    within 1e-6 for lambda in {1e-4, 2.2e-4} and Hmax in {30, 40}.
Outcome criterion2() {
    Outcome out;
    double worst = 0.0;
    std::vector<double> gx, gw;
    detail::gauss_legendre_nodes(96, gx, gw);
    for (double lambda : {1e-4, 2.2e-4}) {
        for (double hmax : {30.0, 40.0}) {
            const ShapeDistribution dist = table_blockers(lambda, hmax);
            const double closed =
                mean_single_link_blockage(300.0, dist, 40.0, 1.5);
            double quad = 0.0;
            for (std::size_t i = 0; i < gx.size(); ++i) {
                const double d = 150.0 * (1.0 + gx[i]);
                const Link link{{0, 0}, {d, 0}, 40.0, 1.5};
                quad += 150.0 * gw[i] * p_blocked(link, dist) * 2.0 * d /
                        (300.0 * 300.0);
            }
            worst = std::max(worst, std::abs(closed - quad));
        }
    }
    out.pass = worst <= 1e-6;
    std::ostringstream ss;
    ss << "max |closed - quadrature| = " << worst;
    out.detail = ss.str();
    return out;
}

// ---------------------------------------------------------------------------
// 3. Single-link analytic within 3 stderr of Monte Carlo at 1e5 trials for
//    d in {0,...,300} and both densities; nonzero blockage at d = 0.
Outcome criterion3() {
    Outcome out;
    double max_z = 0.0;
    const std::uint64_t trials = 100000;
    std::uint64_t row = 0;
    for (double lambda : {1e-4, 2.2e-4}) {
        const ShapeDistribution dist = table_blockers(lambda);
        for (double d = 0.0; d <= 300.0; d += 50.0) {
            const Link link{{0, 0}, {d, 0}, 40.0, 1.5};
            const double p = p_blocked(link, dist);
            const Link links[] = {link};
            const Estimate est = estimate_p_all_blocked(
                LinkSet{{link}, {}}, dist, default_sample_region(links, dist),
                trials, substream_seed(2024, row++));
            const double z = est.std_error > 0.0
                                 ? std::abs(p - est.p_hat) / est.std_error
                                 : (p == est.p_hat ? 0.0 : 1e9);
            max_z = std::max(max_z, z);
        }
    }
    const ShapeDistribution dist = table_blockers(1e-4);
    const double p0 = p_blocked(Link{{0, 0}, {0, 0}, 40.0, 1.5}, dist);
    const double mu_p = footprint_height_factor(1.5, dist.height) *
                        footprint_coverage(dist);
    const bool zero_dist_ok = std::abs(p0 - (-std::expm1(-mu_p))) < 1e-12 &&
                              std::abs(p0 - 0.021148) < 1e-5 && p0 > 0.0;
    out.pass = max_z <= 3.0 && zero_dist_ok;
    std::ostringstream ss;
    ss << "max z = " << max_z << ", p(d=0) = " << p0;
    out.detail = ss.str();
    return out;
}

// ---------------------------------------------------------------------------
// 4. Height-factor closed forms vs numeric cdf integration, 1e-10, including
//    the h0 = h1 limit.
Outcome criterion4() {
    Outcome out;
    std::mt19937_64 gen(404);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double hmax = 5.0 + 45.0 * u01(gen);
        const double h1 = 50.0 * u01(gen);
        const double h0 = (k % 10 == 0) ? h1 : h1 + 50.0 * u01(gen);
        const ScalarDist height = ScalarDist::uniform(hmax);
        const std::optional<ScalarDist> h(height);
        const double eta = sweep_height_factor(h0, h1, h);
        const double eta_ref = oracles::eta_by_numeric_integration(h0, h1, height);
        worst = std::max(worst, std::abs(eta - eta_ref));
        const double mu = footprint_height_factor(h1, h);
        worst = std::max(worst, std::abs(mu - (1.0 - height.cdf(h1))));
    }
    out.pass = worst <= 1e-10;
    std::ostringstream ss;
    ss << "max |closed - numeric| = " << worst;
    out.detail = ss.str();
    return out;
}

// ---------------------------------------------------------------------------
// 5. Geometry oracles: union vs 1 mm rasterization (0.5% on 200 random sets
//    of 2-6 hexagons) and blocking-region area vs the piecewise closed form
//    (1e-9 relative on 1000 random cases).
Outcome criterion5() {
    Outcome out;
    std::mt19937_64 gen(505);
    std::uniform_real_distribution<double> coord(-4.0, 4.0);
    std::uniform_real_distribution<double> dim(0.5, 3.0);
    std::uniform_real_distribution<double> seg(1.0, 4.0);
    std::uniform_real_distribution<double> ang(0.0, kPi);
    std::uniform_int_distribution<int> count(2, 6);
    double worst_union = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<ConvexPolygon> polys;
        const int m = count(gen);
        for (int k = 0; k < m; ++k) {
            const Point2 p0{coord(gen), coord(gen)};
            const double az = 2.0 * kPi * ang(gen);
            const double len = seg(gen);
            const Point2 p1 = p0 + Point2{len * std::cos(az), len * std::sin(az)};
            polys.push_back(
                minkowski_segment_rect(p0, p1, dim(gen), dim(gen), ang(gen)));
        }
        const double exact = union_area(polys);
        const double raster = oracles::rasterized_union_area(polys);
        worst_union = std::max(worst_union,
                               std::abs(exact - raster) / std::max(raster, 1e-12));
    }

    std::uniform_real_distribution<double> lcoord(-150.0, 150.0);
    std::uniform_real_distribution<double> height(0.0, 45.0);
    std::uniform_real_distribution<double> ldim(0.0, 35.0);
    double worst_region = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Link link{{lcoord(gen), lcoord(gen)},
                        {lcoord(gen), lcoord(gen)},
                        height(gen),
                        height(gen)};
        const double l = ldim(gen), w = ldim(gen), h = height(gen),
                     theta = ang(gen);
        const double area = polygon_area(blocking_region(link, l, w, h, theta));
        const double ref =
            oracles::blocking_region_area_closed_form(link, l, w, h, theta);
        if (ref > 0.0)
            worst_region = std::max(worst_region, std::abs(area - ref) / ref);
        else
            worst_region = std::max(worst_region, std::abs(area - ref));
    }
    out.pass = worst_union <= 5e-3 && worst_region <= 1e-9;
    std::ostringstream ss;
    ss << "union vs raster rel " << worst_union << ", region vs closed rel "
       << worst_region;
    out.detail = ss.str();
    return out;
}

// ---------------------------------------------------------------------------
// 6. Two-link correlation ordering with Monte Carlo confirmation.
Outcome criterion6() {
    Outcome out;
    std::mt19937_64 gen(606);
    std::uniform_real_distribution<double> coord(-150.0, 150.0);
    std::uniform_real_distribution<double> height(1.0, 45.0);
    const ShapeDistribution dist = table_blockers(1e-4);
    const QuadratureSpec quad;
    double max_z = 0.0;
    int violations = 0, weak = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const Link l1{{coord(gen), coord(gen)},
                      {coord(gen), coord(gen)},
                      height(gen),
                      height(gen)};
        const Link l2{{coord(gen), coord(gen)},
                      {coord(gen), coord(gen)},
                      height(gen),
                      height(gen)};
        const Link links[] = {l1, l2};
        const std::uint32_t masks[] = {0b01, 0b10, 0b11};
        const std::vector<double> e =
            expected_union_blockers_masks(links, dist, quad, masks);
        const double p1 = -std::expm1(-e[0]);
        const double p2 = -std::expm1(-e[1]);
        const double p_corr =
            1.0 - std::exp(-e[0]) - std::exp(-e[1]) + std::exp(-e[2]);
        const double p_ind = p1 * p2;
        if (p_corr < p_ind - 1e-9) ++violations;
        // overlap mass above the quadrature noise floor; implies a strict gap
        const bool overlaps = e[2] < e[0] + e[1] - 2e-6;
        if (overlaps && p_corr - p_ind <= 1e-6) ++weak;

        const Estimate est = estimate_p_all_paths_blocked(
            links, std::vector<std::uint32_t>{0b01, 0b10}, 0, dist,
            default_sample_region(links, dist), 20000,
            substream_seed(616, rep));
        if (est.std_error > 0.0) {
            max_z = std::max(max_z, std::abs(p_corr - est.p_hat) / est.std_error);
        } else {
            // degenerate 0/1 estimate: fall back to the Wilson interval
            const Interval iv = wilson_interval(est.p_hat, est.trials, 3.0);
            if (p_corr < iv.lo || p_corr > iv.hi) max_z = 1e9;
        }
    }
    out.pass = violations == 0 && weak == 0 && max_z <= 3.0;
    std::ostringstream ss;
    ss << "ordering violations " << violations << ", weak-overlap cases "
       << weak << ", max z = " << max_z;
    out.detail = ss.str();
    return out;
}

// ---------------------------------------------------------------------------
// 7. Sectorized azimuth study: analytic within 3 stderr of MC (1e4 trials)
//    at phi in {0,15,30} deg, and the on-ray jump across the relay ring.
Outcome criterion7() {
    Outcome out;
    CellScenario s;
    s.radius = 300.0;
    s.bs_height = 40.0;
    s.ue_height = 1.5;
    s.relay_count = 3;
    s.relay_radius = 180.0;
    s.relay_height = 20.0;
    s.sectorized = true;
    s.use_budgets = false;
    s.blockers.density = 1e-4;
    // building length/width capped at 15 m for this study
    s.blockers.length = ScalarDist::uniform(15.0);
    s.blockers.width = ScalarDist::uniform(15.0);
    s.blockers.height = ScalarDist::uniform(30.0);
    s.blockers.orientation = ScalarDist::uniform(kPi);

    const QuadratureSpec quad;
    const std::uint64_t trials = 10000;
    double max_z = 0.0;
    std::uint64_t row = 0;
    double jump0 = 0.0, jump15 = 0.0;
    for (double phi_deg : {0.0, 15.0, 30.0}) {
        double p170 = 0.0, p200 = 0.0;
        for (double d : {60.0, 120.0, 170.0, 200.0, 260.0, 300.0}) {
            const UserPosition u{d, phi_deg * kDegToRad};
            const double p = failure_prob_at(u, s, quad);
            const CandidatePaths cp = candidate_paths(u, s);
            const Estimate est = estimate_p_all_paths_blocked(
                cp.links, cp.paths, cp.clear_mask, s.blockers,
                default_sample_region(cp.links, s.blockers), trials,
                substream_seed(707, row++));
            const double z = est.std_error > 0.0
                                 ? std::abs(p - est.p_hat) / est.std_error
                                 : (p == est.p_hat ? 0.0 : 1e9);
            max_z = std::max(max_z, z);
            if (d == 170.0) p170 = p;
            if (d == 200.0) p200 = p;
        }
        if (phi_deg == 0.0) jump0 = p200 - p170;
        if (phi_deg == 15.0) jump15 = p200 - p170;
    }
    const bool jump_ok = jump0 > 5.0 * jump15;
    out.pass = max_z <= 3.0 && jump_ok;
    std::ostringstream ss;
    ss << "max z = " << max_z << ", jump(0 deg) = " << jump0
       << ", jump(15 deg) = " << jump15;
    out.detail = ss.str();
    return out;
}

// ---------------------------------------------------------------------------
// 8. Relay optimization sweep: blocking-only argmin beyond R/2, budget raises
//    the minimum by > 0.05, and the budget-aware argmin is not larger.
Outcome criterion8() {
    Outcome out;
    ScenarioConfig cfg = default_config();
    cfg.scenario.blockers.density = 1e-4;
    std::vector<double> r_grid;
    for (double r = 10.0; r <= 290.0; r += 10.0) r_grid.push_back(r);
    const double h_grid[] = {20.0};
    const OptimizeResult res =
        optimize_relays(cfg.scenario, r_grid, h_grid, cfg.quadrature,
                        cfg.radial_nodes, cfg.azimuth_nodes);
    const bool a = res.best_blocking_only.relay_radius > 150.0;
    const double delta =
        res.best_with_budget.failure - res.best_blocking_only.failure;
    const bool b = delta > 0.05;
    const bool c = res.best_with_budget.relay_radius <=
                   res.best_blocking_only.relay_radius;
    out.pass = a && b && c;
    std::ostringstream ss;
    ss << "blocking-only argmin r* = " << res.best_blocking_only.relay_radius
       << " m (P = " << res.best_blocking_only.failure
       << "), with budgets r* = " << res.best_with_budget.relay_radius
       << " m (P = " << res.best_with_budget.failure
       << "), min increase = " << delta;
    out.detail = ss.str();
    return out;
}

// ---------------------------------------------------------------------------
// 9. Structural invariants: subset monotonicity, superset-link monotonicity,
//    rotational symmetry, density monotonicity, seed reproducibility.
Outcome criterion9() {
    Outcome out;
    std::ostringstream ss;
    bool ok = true;

    const ShapeDistribution dist = table_blockers(1e-4);
    const QuadratureSpec coarse{8, 8, 4, 8};

    {  // subadditivity and monotonicity of the union expectation
        std::mt19937_64 gen(909);
        std::uniform_real_distribution<double> coord(-150.0, 150.0);
        std::uniform_real_distribution<double> height(0.0, 45.0);
        for (int rep = 0; rep < 10 && ok; ++rep) {
            std::vector<Link> links;
            for (int k = 0; k < 3; ++k)
                links.push_back(Link{{coord(gen), coord(gen)},
                                     {coord(gen), coord(gen)},
                                     height(gen),
                                     height(gen)});
            const std::uint32_t masks[] = {1, 2, 4, 3, 7};
            const std::vector<double> e =
                expected_union_blockers_masks(links, dist, coarse, masks);
            ok = ok && e[3] <= e[0] + e[1] + 1e-9 && e[3] <= e[4] + 1e-9 &&
                 e[0] <= e[3] + 1e-9 && e[4] <= e[0] + e[1] + e[2] + 1e-9;
        }
        if (!ok) ss << "subset monotonicity failed; ";
    }

    {  // adding a link to the all-blocked event cannot raise the probability
        const Link l1{{0, 0}, {220, 0}, 40.0, 1.5};
        const Link l2{{0, 0}, {150, 120}, 40.0, 20.0};
        const Link l3{{150, 120}, {240, 10}, 20.0, 1.5};
        const double p2 = p_all_blocked(LinkSet{{l1, l2}, {}}, dist, coarse);
        const double p3 =
            p_all_blocked(LinkSet{{l1, l2, l3}, {}}, dist, coarse);
        if (!(p3 <= p2 + 1e-9)) {
            ok = false;
            ss << "superset-link monotonicity failed; ";
        }
    }

    {  // sectorized rotational symmetry at the default quadrature
        CellScenario s;
        s.relay_count = 3;
        s.relay_radius = 180.0;
        s.relay_height = 20.0;
        s.sectorized = true;
        s.use_budgets = false;
        s.blockers = dist;
        const QuadratureSpec quad;
        const double base = failure_prob_at({230.0, 0.37}, s, quad);
        const double rotated =
            failure_prob_at({230.0, 0.37 + 2.0 * kPi / 3}, s, quad);
        if (std::abs(base - rotated) > 1e-9) {
            ok = false;
            ss << "rotational symmetry off by " << std::abs(base - rotated)
               << "; ";
        }
    }

    {  // cell-average failure is monotone in the density
        CellScenario s;
        s.relay_count = 3;
        s.relay_radius = 180.0;
        s.relay_height = 20.0;
        s.sectorized = true;
        s.use_budgets = false;
        double previous = -1.0;
        for (double lambda : {0.5e-4, 1e-4, 2.2e-4}) {
            s.blockers = table_blockers(lambda);
            const double p = average_failure_prob(s, coarse, 8, 4);
            if (p <= previous) {
                ok = false;
                ss << "density monotonicity failed; ";
                break;
            }
            previous = p;
        }
    }

    {  // identical seeds and varying worker counts give identical estimates
        const Link link{{0, 0}, {250, 0}, 40.0, 1.5};
        const Link links[] = {link};
        const SampleRegion region = default_sample_region(links, dist);
        setenv("BLOCKAGE_THREADS", "1", 1);
        const Estimate a =
            estimate_p_all_blocked(LinkSet{{link}, {}}, dist, region, 20000, 5);
        setenv("BLOCKAGE_THREADS", "2", 1);
        const Estimate b =
            estimate_p_all_blocked(LinkSet{{link}, {}}, dist, region, 20000, 5);
        unsetenv("BLOCKAGE_THREADS");
        if (a.p_hat != b.p_hat) {
            ok = false;
            ss << "seed reproducibility failed; ";
        }
    }

    out.pass = ok;
    out.detail = ok ? "all structural invariants hold" : ss.str();
    return out;
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> fn;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "link-budget reproduction", criterion1},
        {2, "closed form vs quadrature cell mean", criterion2},
        {3, "single-link Monte Carlo agreement", criterion3},
        {4, "height-factor identities", criterion4},
        {5, "geometry oracles", criterion5},
        {6, "two-link correlation ordering", criterion6},
        {7, "sectorized azimuth study", criterion7},
        {8, "relay optimization sweep", criterion8},
        {9, "structural invariant suite", criterion9},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        Outcome outcome;
        try {
            outcome = c.fn();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion "
                  << c.id << ": " << c.name << " (" << outcome.detail << ")"
                  << std::endl;
        if (!outcome.pass) ++failures;
    }
    return failures;
}
