#include "blockage/cell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "blockage/parallel.hpp"

namespace blockage {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSpeedOfLight = 299792458.0;

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    detail::gauss_legendre_nodes(n, x, w);
}

double link_distance3d(const Link& link) {
    return std::hypot(link.ground_distance(), link.height_b - link.height_a);
}

}  // namespace

void CellScenario::validate() const {
    if (!(radius > 0.0)) throw std::invalid_argument("cell radius must be > 0");
    if (!(bs_height >= 0.0) || !(ue_height >= 0.0) || !(relay_height >= 0.0))
        throw std::invalid_argument("heights must be >= 0");
    if (relay_count < 0)
        throw std::invalid_argument("relay count must be >= 0");
    if (relay_count > 0 && !(relay_radius >= 0.0 && relay_radius <= radius))
        throw std::invalid_argument("relay ring must satisfy 0 <= r <= R");
    blockers.validate();
    for (const LinkBudget* b : {&budget_bs_ue, &budget_bs_rs, &budget_rs_ue}) {
        if (!(b->frequency_hz > 0.0))
            throw std::invalid_argument("carrier frequency must be > 0");
        if (!(b->pathloss_exponent > 0.0))
            throw std::invalid_argument("path-loss exponent must be > 0");
    }
}

std::vector<double> relay_azimuths(int count) {
    std::vector<double> out;
    if (count <= 0) return out;
    out.reserve(count);
    for (int n = 0; n < count; ++n)
        out.push_back(2.0 * kPi * static_cast<double>(n) / count);
    return out;
}

double path_loss_db(double distance3d_m, const LinkBudget& budget) {
    if (!(distance3d_m > 0.0))
        throw std::invalid_argument("path loss needs a positive distance");
    const double d = std::max(distance3d_m, 1.0);
    const double intercept =
        20.0 * std::log10(4.0 * kPi * budget.frequency_hz / kSpeedOfLight);
    return intercept + 10.0 * budget.pathloss_exponent * std::log10(d);
}

double max_allowable_path_loss(const LinkBudget& budget) {
    return budget.tx_power_dbm + budget.tx_gain_dbi + budget.rx_gain_dbi -
           budget.sensitivity_dbm;
}

bool link_feasible(const Link& link, const LinkBudget& budget) {
    const double d3 = std::max(link_distance3d(link), 1.0);
    return path_loss_db(d3, budget) <= max_allowable_path_loss(budget);
}

namespace {

// Sector index of azimuth phi for `count` sectors centered on the relay
// azimuths; exact boundaries go to the lower-index sector.
int sector_of(double phi, int count) {
    const double width = 2.0 * kPi / count;
    double t = phi / width + 0.5;
    double whole = std::floor(t);
    int n;
    if (t == whole) {
        const int hi = static_cast<int>(whole);
        const int a = ((hi - 1) % count + count) % count;
        const int b = (hi % count + count) % count;
        n = std::min(a, b);
    } else {
        n = static_cast<int>(whole) % count;
        if (n < 0) n += count;
    }
    return n;
}

}  // namespace

CandidatePaths candidate_paths(const UserPosition& u, const CellScenario& s) {
    if (!(u.distance >= 0.0 && u.distance <= s.radius))
        throw std::invalid_argument("user position outside the cell");
    CandidatePaths cp;
    const Point2 bs{0.0, 0.0};
    const Point2 user{u.distance * std::cos(u.azimuth),
                      u.distance * std::sin(u.azimuth)};
    cp.links.push_back(Link{bs, user, s.bs_height, s.ue_height});
    cp.paths.push_back(1u);
    cp.path_feasible.push_back(link_feasible(cp.links[0], s.budget_bs_ue));

    if (s.relay_count > 0) {
        std::vector<int> chosen;
        if (s.sectorized) {
            chosen.push_back(sector_of(u.azimuth, s.relay_count));
        } else {
            for (int n = 0; n < s.relay_count; ++n) chosen.push_back(n);
        }
        for (int n : chosen) {
            const double psi = 2.0 * kPi * static_cast<double>(n) / s.relay_count;
            const Point2 relay{s.relay_radius * std::cos(psi),
                               s.relay_radius * std::sin(psi)};
            const std::uint32_t idx_br = static_cast<std::uint32_t>(cp.links.size());
            cp.links.push_back(Link{bs, relay, s.bs_height, s.relay_height});
            const std::uint32_t idx_ru = static_cast<std::uint32_t>(cp.links.size());
            cp.links.push_back(Link{relay, user, s.relay_height, s.ue_height});
            cp.paths.push_back((1u << idx_br) | (1u << idx_ru));
            if (s.bs_relay_los_assumed) cp.clear_mask |= 1u << idx_br;
            cp.path_feasible.push_back(
                link_feasible(cp.links[idx_br], s.budget_bs_rs) &&
                link_feasible(cp.links[idx_ru], s.budget_rs_ue));
        }
    }
    return cp;
}

namespace {

struct PathTerms {
    std::vector<double> terms;  // conditional OK terms per path subset
    std::uint32_t all_mask = 0;
    std::uint32_t feasible_mask = 0;
};

PathTerms path_terms(const UserPosition& u, const CellScenario& s,
                     const QuadratureSpec& quad) {
    const CandidatePaths cp = candidate_paths(u, s);
    PathTerms pt;
    pt.terms = conditional_ok_terms(cp.links, cp.paths, cp.clear_mask,
                                    s.blockers, quad);
    pt.all_mask = (1u << cp.paths.size()) - 1u;
    for (std::size_t p = 0; p < cp.paths.size(); ++p)
        if (cp.path_feasible[p]) pt.feasible_mask |= 1u << p;
    return pt;
}

FailureSplit split_from_terms(const PathTerms& pt) {
    FailureSplit out;
    out.blocking_only =
        std::clamp(all_fail_from_ok_terms(pt.terms, pt.all_mask), 0.0, 1.0);
    out.with_budget =
        pt.feasible_mask == 0
            ? 1.0
            : std::clamp(all_fail_from_ok_terms(pt.terms, pt.feasible_mask),
                         0.0, 1.0);
    return out;
}

}  // namespace

FailureSplit failure_prob_at_split(const UserPosition& u,
                                   const CellScenario& s,
                                   const QuadratureSpec& quad) {
    s.validate();
    return split_from_terms(path_terms(u, s, quad));
}

double failure_prob_at(const UserPosition& u, const CellScenario& s,
                       const QuadratureSpec& quad) {
    const FailureSplit split = failure_prob_at_split(u, s, quad);
    return s.use_budgets ? split.with_budget : split.blocking_only;
}

double failure_prob_at_independent(const UserPosition& u,
                                   const CellScenario& s,
                                   const QuadratureSpec& quad) {
    s.validate();
    const CandidatePaths cp = candidate_paths(u, s);

    // Per-link conditional expectations; a path fails iff any of its links is
    // blocked, links treated as independent.
    std::vector<std::uint32_t> masks{cp.clear_mask};
    for (std::size_t i = 0; i < cp.links.size(); ++i)
        masks.push_back(cp.clear_mask | (1u << i));
    std::vector<double> expectations;
    if (cp.clear_mask == 0) {
        std::vector<std::uint32_t> nonzero(masks.begin() + 1, masks.end());
        std::vector<double> rest = expected_union_blockers_masks(
            cp.links, s.blockers, quad, nonzero);
        expectations.assign(masks.size(), 0.0);
        std::copy(rest.begin(), rest.end(), expectations.begin() + 1);
    } else {
        expectations =
            expected_union_blockers_masks(cp.links, s.blockers, quad, masks);
    }

    double product = 1.0;
    bool any_feasible = false;
    for (std::size_t p = 0; p < cp.paths.size(); ++p) {
        if (s.use_budgets && !cp.path_feasible[p]) continue;  // fails surely
        any_feasible = true;
        double sum_e = 0.0;
        for (std::size_t i = 0; i < cp.links.size(); ++i)
            if (cp.paths[p] & (1u << i))
                sum_e += expectations[i + 1] - expectations[0];
        product *= -std::expm1(-sum_e);
    }
    if (s.use_budgets && !any_feasible) return 1.0;
    return std::clamp(product, 0.0, 1.0);
}

namespace {

// Horizontal distance at which a link class with fixed endpoint heights hits
// its budget limit; +infinity when the whole plane is feasible.
double feasibility_ground_radius(double h_a, double h_b,
                                 const LinkBudget& budget) {
    const double intercept =
        20.0 * std::log10(4.0 * kPi * budget.frequency_hz / kSpeedOfLight);
    const double d3 = std::pow(
        10.0, (max_allowable_path_loss(budget) - intercept) /
                  (10.0 * budget.pathloss_exponent));
    const double dh = h_b - h_a;
    const double sq = d3 * d3 - dh * dh;
    return sq <= 0.0 ? 0.0 : std::sqrt(sq);
}

struct UserNode {
    double distance;
    double azimuth;
    double weight;
};

std::vector<UserNode> user_nodes(const CellScenario& s, int radial_nodes,
                                 int azimuth_nodes) {
    if (radial_nodes < 2 || azimuth_nodes < 2)
        throw std::invalid_argument("user-average node counts must be >= 2");
    const double R = s.radius;

    // Radial panels split where the integrand kinks: the relay ring and the
    // direct-link budget boundary.
    std::vector<double> cuts{0.0, R};
    if (s.relay_count > 0 && s.relay_radius > 0.0 && s.relay_radius < R)
        cuts.push_back(s.relay_radius);
    const double bu_limit =
        feasibility_ground_radius(s.bs_height, s.ue_height, s.budget_bs_ue);
    if (bu_limit > 1.0 && bu_limit < R) cuts.push_back(bu_limit);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return b - a < 1e-9; }),
               cuts.end());

    std::vector<double> radial_x, radial_w;
    {
        std::vector<double> gx, gw;
        for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
            const double a = cuts[p], b = cuts[p + 1];
            const int n = std::max(
                2, static_cast<int>(std::lround(radial_nodes * (b - a) / R)));
            gauss_legendre(n, gx, gw);
            for (int i = 0; i < n; ++i) {
                const double d = 0.5 * (a + b) + 0.5 * (b - a) * gx[i];
                // f_D(d) = 2 d / R^2
                radial_x.push_back(d);
                radial_w.push_back(0.5 * (b - a) * gw[i] * 2.0 * d / (R * R));
            }
        }
    }

    std::vector<double> az_x, az_w;
    if (s.relay_count == 0) {
        az_x = {0.0};
        az_w = {1.0};
    } else {
        const int n_relays = s.relay_count;
        const bool symmetric =
            s.blockers.orientation.is_uniform();  // support [0, pi] validated
        std::vector<double> gx, gw;
        if (symmetric) {
            // One half-sector, by the N-fold rotation and reflection symmetry.
            const double hi = kPi / n_relays;
            gauss_legendre(azimuth_nodes, gx, gw);
            for (int i = 0; i < azimuth_nodes; ++i) {
                az_x.push_back(0.5 * hi + 0.5 * hi * gx[i]);
                az_w.push_back(0.5 * hi * gw[i] * n_relays / kPi);
            }
        } else {
            const int n = azimuth_nodes * 2 * n_relays;
            gauss_legendre(n, gx, gw);
            for (int i = 0; i < n; ++i) {
                az_x.push_back(kPi + kPi * gx[i]);
                az_w.push_back(kPi * gw[i] / (2.0 * kPi));
            }
        }
    }

    std::vector<UserNode> nodes;
    nodes.reserve(radial_x.size() * az_x.size());
    for (std::size_t i = 0; i < radial_x.size(); ++i)
        for (std::size_t j = 0; j < az_x.size(); ++j)
            nodes.push_back({radial_x[i], az_x[j], radial_w[i] * az_w[j]});
    return nodes;
}

}  // namespace

FailureSplit average_failure_prob_split(const CellScenario& s,
                                        const QuadratureSpec& quad,
                                        int radial_nodes, int azimuth_nodes) {
    s.validate();
    const std::vector<UserNode> nodes = user_nodes(s, radial_nodes, azimuth_nodes);
    std::vector<FailureSplit> results(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t i) {
        results[i] = split_from_terms(
            path_terms({nodes[i].distance, nodes[i].azimuth}, s, quad));
    });
    FailureSplit avg;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        avg.blocking_only += nodes[i].weight * results[i].blocking_only;
        avg.with_budget += nodes[i].weight * results[i].with_budget;
    }
    avg.blocking_only = std::clamp(avg.blocking_only, 0.0, 1.0);
    avg.with_budget = std::clamp(avg.with_budget, 0.0, 1.0);
    return avg;
}

double average_failure_prob(const CellScenario& s, const QuadratureSpec& quad,
                            int radial_nodes, int azimuth_nodes) {
    const FailureSplit split =
        average_failure_prob_split(s, quad, radial_nodes, azimuth_nodes);
    return s.use_budgets ? split.with_budget : split.blocking_only;
}

double mean_single_link_blockage(double radius, const ShapeDistribution& dist,
                                 double bs_height, double ue_height) {
    if (!(radius > 0.0)) throw std::invalid_argument("cell radius must be > 0");
    const double hi = std::max(bs_height, ue_height);
    const double lo = std::min(bs_height, ue_height);
    const double x =
        sweep_height_factor(hi, lo, dist.height) * sweep_rate(dist) * radius;
    const double mp =
        footprint_height_factor(lo, dist.height) * footprint_coverage(dist);
    if (x < 1e-12) return -std::expm1(-mp);
    // 1 + 2(x - e^x + 1)/x^2 * e^(-(x+mp)), written through expm1 to keep the
    // small-x cancellation harmless.
    return 1.0 - 2.0 * (std::expm1(x) - x) / (x * x) * std::exp(-(x + mp));
}

OptimizeResult optimize_relays(const CellScenario& s,
                               std::span<const double> r_grid,
                               std::span<const double> h_grid,
                               const QuadratureSpec& quad, int radial_nodes,
                               int azimuth_nodes) {
    if (r_grid.empty() || h_grid.empty())
        throw std::invalid_argument("optimization grids must be non-empty");
    OptimizeResult result;
    auto better = [](double p, double r, double h, const RelayPlacement& cur) {
        if (p != cur.failure) return p < cur.failure;
        if (r != cur.relay_radius) return r < cur.relay_radius;
        return h < cur.relay_height;
    };
    bool first = true;
    for (double r : r_grid) {
        for (double h : h_grid) {
            CellScenario trial = s;
            trial.relay_radius = r;
            trial.relay_height = h;
            const FailureSplit split = average_failure_prob_split(
                trial, quad, radial_nodes, azimuth_nodes);
            result.table.push_back({r, h, split.blocking_only, split.with_budget});
            if (first || better(split.blocking_only, r, h, result.best_blocking_only))
                result.best_blocking_only = {r, h, split.blocking_only};
            if (first || better(split.with_budget, r, h, result.best_with_budget))
                result.best_with_budget = {r, h, split.with_budget};
            first = false;
        }
    }
    result.best = s.use_budgets ? result.best_with_budget : result.best_blocking_only;
    return result;
}

}  // namespace blockage
