#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "blockage/shapes.hpp"

namespace blockage {

// Largest link pool handled by exact inclusion-exclusion.
inline constexpr int kMaxLinks = 12;

// Gauss-Legendre tensor grid over the blocker parameter distributions.
// Deterministic (or absent) dimensions collapse to a single node. The height
// dimension is integrated piecewise between link endpoint heights; the
// orientation dimension is split at the angles where a blocking region's
// area has a kink (link azimuth and its normal), with the node budget spread
// over the pieces.
struct QuadratureSpec {
    int nodes_l = 16;
    int nodes_w = 16;
    int nodes_h = 8;  // per height piece
    int nodes_theta = 16;

    void validate() const;  // throws std::invalid_argument if any count < 1
};

// An ordered set of links plus the subset asserted to be in LOS.
struct LinkSet {
    std::vector<Link> links;
    std::vector<std::size_t> clear;
};

// E[number of blockers hitting at least one of the links selected by each
// mask], all evaluated in one shared quadrature pass. Bit i of a mask selects
// links[i]; a zero mask yields 0.
std::vector<double> expected_union_blockers_masks(
    std::span<const Link> links, const ShapeDistribution& dist,
    const QuadratureSpec& quad, std::span<const std::uint32_t> masks);

// E[number of blockers hitting at least one of the links].
double expected_blockers_union(std::span<const Link> links,
                               const ShapeDistribution& dist,
                               const QuadratureSpec& quad);

// Conditional joint-OK terms for composite events over a shared link pool.
// events[e] is a link mask; the returned vector has 2^events.size() entries
// and entry G (a subset of event indices) equals
//   exp(-(E[K of union(links of G) | clear links unblocked]))
// with the conditional expectation computed through the set-difference area
// identity. Entry 0 is 1.
std::vector<double> conditional_ok_terms(std::span<const Link> links,
                                         std::span<const std::uint32_t> events,
                                         std::uint32_t clear_mask,
                                         const ShapeDistribution& dist,
                                         const QuadratureSpec& quad);

// P(every event in active_mask fails) assembled by inclusion-exclusion from
// conditional OK terms (as returned by conditional_ok_terms). Unclamped.
double all_fail_from_ok_terms(std::span<const double> terms,
                              std::uint32_t active_mask);

// P(every link outside the clear set is blocked | clear links unblocked).
double p_all_blocked(const LinkSet& ls, const ShapeDistribution& dist,
                     const QuadratureSpec& quad);

// Same, without the final clamp to [0, 1]; the raw inclusion-exclusion sum.
double p_all_blocked_raw(const LinkSet& ls, const ShapeDistribution& dist,
                         const QuadratureSpec& quad);

// Baseline that assumes blockages on different links are independent:
// product of per-link conditional blockage probabilities.
double p_all_blocked_independent(const LinkSet& ls,
                                 const ShapeDistribution& dist,
                                 const QuadratureSpec& quad);

namespace detail {
// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre_nodes(int n, std::vector<double>& x,
                          std::vector<double>& w);
}  // namespace detail

}  // namespace blockage
