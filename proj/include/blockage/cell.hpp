#pragma once

#include <span>
#include <vector>

#include "blockage/multilink.hpp"

namespace blockage {

// Per-link-class power accounting. rx_gain is kept as an explicit field so a
// receive gain can be included or zeroed per class.
struct LinkBudget {
    double tx_power_dbm = 0.0;
    double tx_gain_dbi = 0.0;
    double rx_gain_dbi = 0.0;
    double sensitivity_dbm = 0.0;
    double frequency_hz = 28e9;
    double pathloss_exponent = 2.3;
};

struct CellScenario {
    double radius = 300.0;
    double bs_height = 40.0;
    double ue_height = 1.5;
    int relay_count = 0;
    double relay_radius = 0.0;
    double relay_height = 0.0;
    bool sectorized = false;
    ShapeDistribution blockers;
    LinkBudget budget_bs_ue;
    LinkBudget budget_bs_rs;
    LinkBudget budget_rs_ue;
    bool bs_relay_los_assumed = false;
    bool use_budgets = true;

    void validate() const;
};

struct UserPosition {
    double distance = 0.0;  // to the BS
    double azimuth = 0.0;   // radians
};

// Equispaced relay azimuths starting at 0; empty for count = 0.
std::vector<double> relay_azimuths(int count);

// Close-in reference at 1 m: 20*log10(4*pi*f*1m/c) + 10*alpha*log10(d/1m),
// with distances below 1 m clamped to 1 m. Throws for d <= 0.
double path_loss_db(double distance3d_m, const LinkBudget& budget);

// tx_power + tx_gain + rx_gain - sensitivity.
double max_allowable_path_loss(const LinkBudget& budget);

// Path loss at the 3D distance (including the endpoint height difference)
// within the budget. Ignores blockers.
bool link_feasible(const Link& link, const LinkBudget& budget);

// Candidate connectivity for one user position: the direct link plus one
// two-link path per reachable relay (the sector's relay when sectorized, all
// relays otherwise). paths[0] is the direct path.
struct CandidatePaths {
    std::vector<Link> links;           // links[0] is the BS-UE link
    std::vector<std::uint32_t> paths;  // link masks
    std::uint32_t clear_mask = 0;      // BS-RS links when assumed in LOS
    std::vector<bool> path_feasible;   // budget feasibility per path
};
CandidatePaths candidate_paths(const UserPosition& u, const CellScenario& s);

struct FailureSplit {
    double blocking_only = 0.0;  // budgets ignored
    double with_budget = 0.0;    // infeasible paths removed
};

// P(no candidate path is simultaneously unblocked and feasible | user at u),
// both with and without the budget gating, sharing one quadrature pass.
FailureSplit failure_prob_at_split(const UserPosition& u,
                                   const CellScenario& s,
                                   const QuadratureSpec& quad);

// The scenario-selected mode of failure_prob_at_split.
double failure_prob_at(const UserPosition& u, const CellScenario& s,
                       const QuadratureSpec& quad);

// Baseline assuming independent blockages across links.
double failure_prob_at_independent(const UserPosition& u,
                                   const CellScenario& s,
                                   const QuadratureSpec& quad);

// Average of failure_prob_at over the user position pdfs f_D(d) = 2d/R^2 and
// uniform azimuth, via Gauss-Legendre nodes (radial panels split at the relay
// ring and budget boundaries).
FailureSplit average_failure_prob_split(const CellScenario& s,
                                        const QuadratureSpec& quad,
                                        int radial_nodes, int azimuth_nodes);
double average_failure_prob(const CellScenario& s, const QuadratureSpec& quad,
                            int radial_nodes = 24, int azimuth_nodes = 8);

// Closed-form cell average of the single-link blockage probability:
// 1 + 2(x - e^x + 1)/x^2 * exp(-(x + mu*p)) with x = eta*beta*R.
double mean_single_link_blockage(double radius, const ShapeDistribution& dist,
                                 double bs_height, double ue_height);

struct RelayPlacement {
    double relay_radius = 0.0;
    double relay_height = 0.0;
    double failure = 1.0;
};

struct OptimizeResult {
    struct Row {
        double relay_radius = 0.0;
        double relay_height = 0.0;
        double p_blocking_only = 0.0;
        double p_with_budget = 0.0;
    };
    std::vector<Row> table;             // one row per (r, h) grid point
    RelayPlacement best;                // scenario mode (use_budgets)
    RelayPlacement best_blocking_only;  // budgets ignored
    RelayPlacement best_with_budget;    // budgets applied
};

// Exhaustive grid evaluation of the cell-average failure; ties go to the
// smaller radius, then the smaller height.
OptimizeResult optimize_relays(const CellScenario& s,
                               std::span<const double> r_grid,
                               std::span<const double> h_grid,
                               const QuadratureSpec& quad,
                               int radial_nodes = 24, int azimuth_nodes = 8);

}  // namespace blockage
