#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "blockage/multilink.hpp"

namespace blockage {

// One realization of the boolean model.
struct Blocker {
    Point2 center;
    double length = 0.0;
    double width = 0.0;
    double height = 0.0;  // +infinity for no-height models
    double orientation = 0.0;
};

// Truncation window for the infinite point process.
struct SampleRegion {
    Point2 center;
    double radius = 0.0;
};

struct Estimate {
    double p_hat = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
};

// Wilson score interval for a binomial proportion (useful near 0 or 1).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};
Interval wilson_interval(double p_hat, std::uint64_t trials, double z = 3.0);

// Counter-derived substream seed: trial i gets the same stream no matter how
// trials are scheduled across threads.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index);

// Deterministic random stream (mt19937_64 core, portable output).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}
    double uniform01();  // [0, 1)
    std::uint64_t poisson(double mean);

private:
    std::mt19937_64 gen_;
};

// Poisson(density * area) blockers with centers uniform on the disc and
// dimensions/orientation i.i.d. from the distribution.
std::vector<Blocker> sample_scene(const SampleRegion& region,
                                  const ShapeDistribution& dist,
                                  RngStream& rng);
void sample_scene_into(const SampleRegion& region, const ShapeDistribution& dist,
                       RngStream& rng, std::vector<Blocker>& out);

// True iff the blocker footprint crosses the link's ground segment at a point
// where the interpolated link height does not exceed the blocker height.
bool blocks(const Blocker& blocker, const Link& link);

// Disc covering every link endpoint plus the half-diagonal of the largest
// possible footprint, so blockers centered outside still register.
SampleRegion default_sample_region(std::span<const Link> links,
                                   const ShapeDistribution& dist);

// Fraction of scenes in which every selected path has at least one blocked
// link, conditioning on the clear links being unblocked by rejection
// sampling. paths are link masks over `links`.
Estimate estimate_p_all_paths_blocked(std::span<const Link> links,
                                      std::span<const std::uint32_t> paths,
                                      std::uint32_t clear_mask,
                                      const ShapeDistribution& dist,
                                      const SampleRegion& region,
                                      std::uint64_t trials, std::uint64_t seed);

// Fraction of scenes in which every link outside the clear set is blocked.
Estimate estimate_p_all_blocked(const LinkSet& ls,
                                const ShapeDistribution& dist,
                                const SampleRegion& region,
                                std::uint64_t trials, std::uint64_t seed);

}  // namespace blockage
