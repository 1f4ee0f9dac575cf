#pragma once

#include <optional>

#include "blockage/geom2d.hpp"

namespace blockage {

// Marginal law of one blocker dimension: uniform on [0, max] or a point mass.
class ScalarDist {
public:
    static ScalarDist uniform(double max);
    static ScalarDist deterministic(double value);

    bool is_uniform() const { return uniform_; }
    bool is_deterministic() const { return !uniform_; }
    // Upper end of the support (the value itself for a point mass).
    double upper() const { return param_; }
    double mean() const;
    double cdf(double x) const;
    // Integral of the cdf over [a, b], a <= b; closed form per kind.
    double cdf_integral(double a, double b) const;

private:
    ScalarDist(bool uniform, double param) : uniform_(uniform), param_(param) {}
    bool uniform_ = false;
    double param_ = 0.0;
};

// Statistical description of the blocker population: length L, width W,
// optional height H (absent means blockers are infinitely tall), orientation
// Theta, and spatial density lambda of centers per square meter.
struct ShapeDistribution {
    ScalarDist length = ScalarDist::deterministic(0.0);
    ScalarDist width = ScalarDist::deterministic(0.0);
    std::optional<ScalarDist> height;
    ScalarDist orientation = ScalarDist::uniform(0.0);
    double density = 0.0;

    // Throws std::invalid_argument on violated invariants (negative density,
    // orientation support outside [0, pi], uniform orientation not spanning
    // exactly [0, pi]).
    void validate() const;
};

// A 3D link: two ground positions, each with an endpoint height.
struct Link {
    Point2 a;
    Point2 b;
    double height_a = 0.0;
    double height_b = 0.0;

    double ground_distance() const { return distance(a, b); }
};

// Expected blockers whose sweep crosses a unit length of link, per meter:
// 2*lambda*(E[L]+E[W])/pi. Valid only for orientation uniform on [0, pi];
// otherwise throws UnsupportedDistributionError.
double sweep_rate(const ShapeDistribution& dist);

// Expected number of blocker footprints covering a fixed point:
// lambda*E[L]*E[W].
double footprint_coverage(const ShapeDistribution& dist);

// Fraction of the sweep term surviving the height comparison against a link
// descending from h_hi to h_lo: 1 - (1/(h_hi-h_lo)) * integral of F_H over
// [h_lo, h_hi]; continuous limit 1 - F_H(h_hi) when h_hi == h_lo; 1 when no
// height distribution is given. Requires h_hi >= h_lo >= 0.
double sweep_height_factor(double h_hi, double h_lo,
                           const std::optional<ScalarDist>& height);

// Fraction of footprints taller than the low link endpoint: 1 - F_H(h_lo);
// 1 when no height distribution is given.
double footprint_height_factor(double h_lo,
                               const std::optional<ScalarDist>& height);

// Mean number of blockers intersecting the link in 3D:
// sweep_height_factor * sweep_rate * ground_distance +
// footprint_height_factor * footprint_coverage.
double expected_blockers(const Link& link, const ShapeDistribution& dist);

// 1 - exp(-expected_blockers), in [0, 1).
double p_blocked(const Link& link, const ShapeDistribution& dist);

// Region of centers of a concrete blocker (length l, width w, height h,
// global orientation theta) that blocks the link. Height truncation sweeps
// only the sub-segment where the link sightline is at or below h, anchored
// at the low endpoint; h may be +infinity for no-height models.
ConvexPolygon blocking_region(const Link& link, double l, double w, double h,
                              double theta);

namespace detail {
// Test hook: scales sweep_height_factor by BLOCKAGE_DEBUG_ETA_SCALE when the
// environment variable is set (read once per process).
double debug_eta_scale();

// blocking_region writing into a reused vertex buffer.
void blocking_region_into(const Link& link, double l, double w, double h,
                          double theta, std::vector<Point2>& out);
}  // namespace detail

}  // namespace blockage
