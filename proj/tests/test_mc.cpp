#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "blockage/mc.hpp"
#include "doctest.h"

using namespace blockage;

namespace {

constexpr double kPi = std::numbers::pi;

ShapeDistribution table_defaults(double density = 1e-4) {
    ShapeDistribution dist;
    dist.density = density;
    dist.length = ScalarDist::uniform(30.0);
    dist.width = ScalarDist::uniform(30.0);
    dist.height = ScalarDist::uniform(30.0);
    dist.orientation = ScalarDist::uniform(kPi);
    return dist;
}

}  // namespace

TEST_CASE("sample_scene count statistics and degenerate cases") {
    const SampleRegion region{{0, 0}, 300.0};
    ShapeDistribution empty = table_defaults(0.0);
    RngStream rng(1);
    CHECK(sample_scene(region, empty, rng).empty());

    const ShapeDistribution dist = table_defaults();
    const double mean_expected = dist.density * kPi * 300.0 * 300.0;
    RngStream rng2(42);
    const int scenes = 20000;
    double total = 0.0;
    for (int i = 0; i < scenes; ++i)
        total += static_cast<double>(sample_scene(region, dist, rng2).size());
    const double mean = total / scenes;
    const double sigma = std::sqrt(mean_expected / scenes);
    CHECK(std::abs(mean - mean_expected) <= 3.0 * sigma);

    ShapeDistribution det = table_defaults();
    det.length = ScalarDist::deterministic(12.0);
    det.width = ScalarDist::deterministic(7.0);
    det.height = ScalarDist::deterministic(9.0);
    RngStream rng3(7);
    for (const Blocker& b : sample_scene(region, det, rng3)) {
        CHECK(b.length == 12.0);
        CHECK(b.width == 7.0);
        CHECK(b.height == 9.0);
        CHECK(b.orientation >= 0.0);
        CHECK(b.orientation < kPi);
    }
}

TEST_CASE("blocks hand example") {
    const Link link{{0, 0}, {100, 0}, 40.0, 1.5};
    Blocker b;
    b.center = {50.0, 0.0};
    b.length = 10.0;
    b.width = 10.0;
    b.orientation = 0.0;
    b.height = 25.0;
    CHECK(blocks(b, link));  // link height over the crossing dips to 18.9
    b.height = 18.0;
    CHECK_FALSE(blocks(b, link));
    b.height = std::numeric_limits<double>::infinity();
    CHECK(blocks(b, link));
    b.center = {50.0, 30.0};  // footprint far from the segment
    CHECK_FALSE(blocks(b, link));
}

TEST_CASE("blocks agrees with blocking_region membership") {
    std::mt19937_64 gen(97);
    std::uniform_real_distribution<double> coord(-80.0, 80.0);
    std::uniform_real_distribution<double> height(0.0, 45.0);
    std::uniform_real_distribution<double> dim(0.1, 30.0);
    std::uniform_real_distribution<double> ang(0.0, kPi);
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
        const Link link{{coord(gen), coord(gen)},
                        {coord(gen), coord(gen)},
                        height(gen),
                        height(gen)};
        Blocker b;
        b.center = {coord(gen), coord(gen)};
        b.length = dim(gen);
        b.width = dim(gen);
        b.height = height(gen);
        b.orientation = ang(gen);
        const ConvexPolygon region =
            blocking_region(link, b.length, b.width, b.height, b.orientation);
        // skip centers within a small band around the region boundary
        const bool strictly_inside = region.contains(b.center, -1e-7);
        const bool strictly_outside =
            region.empty() || !region.contains(b.center, 1e-7);
        if (!strictly_inside && !strictly_outside) continue;
        ++checked;
        CHECK(blocks(b, link) == strictly_inside);
    }
    CHECK(checked > 9000);
}

TEST_CASE("estimate is reproducible and matches the single-link analytic") {
    const ShapeDistribution dist = table_defaults();
    const Link link{{0, 0}, {300, 0}, 40.0, 1.5};
    const Link links[] = {link};
    const SampleRegion region = default_sample_region(links, dist);
    const LinkSet ls{{link}, {}};

    const Estimate a = estimate_p_all_blocked(ls, dist, region, 20000, 99);
    const Estimate b = estimate_p_all_blocked(ls, dist, region, 20000, 99);
    CHECK(a.p_hat == b.p_hat);
    CHECK(a.std_error == b.std_error);

    const double analytic = 0.19975740584288126;
    CHECK(std::abs(a.p_hat - analytic) <= 3.0 * a.std_error);

    // identical regardless of the worker count
    setenv("BLOCKAGE_THREADS", "1", 1);
    const Estimate serial = estimate_p_all_blocked(ls, dist, region, 5000, 7);
    setenv("BLOCKAGE_THREADS", "2", 1);
    const Estimate threaded = estimate_p_all_blocked(ls, dist, region, 5000, 7);
    unsetenv("BLOCKAGE_THREADS");
    CHECK(serial.p_hat == threaded.p_hat);
}

TEST_CASE("zero density and duplicated links") {
    ShapeDistribution empty = table_defaults(0.0);
    const Link link{{0, 0}, {150, 0}, 40.0, 1.5};
    const Link links[] = {link};
    const SampleRegion region = default_sample_region(links, empty);
    const Estimate e = estimate_p_all_blocked(LinkSet{{link}, {}}, empty,
                                              region, 2000, 5);
    CHECK(e.p_hat == 0.0);

    const ShapeDistribution dist = table_defaults();
    const Estimate one =
        estimate_p_all_blocked(LinkSet{{link}, {}}, dist, region, 4000, 11);
    const Estimate two = estimate_p_all_blocked(LinkSet{{link, link}, {}},
                                                dist, region, 4000, 11);
    CHECK(one.p_hat == two.p_hat);  // the same event on the same stream

    CHECK_THROWS_AS(
        estimate_p_all_blocked(LinkSet{{link}, {}}, dist, region, 0, 1),
        std::invalid_argument);
}

TEST_CASE("conditioning by rejection matches the analytic conditional") {
    const ShapeDistribution dist = table_defaults(2e-4);
    const Link target{{0, 0}, {200, 0}, 40.0, 1.5};
    const Link clear{{0, 0}, {200, 0}, 40.0, 25.0};
    const LinkSet ls{{target, clear}, {1}};
    const Link links[] = {target, clear};
    const SampleRegion region = default_sample_region(links, dist);
    const Estimate est = estimate_p_all_blocked(ls, dist, region, 20000, 17);
    const double analytic = p_all_blocked(ls, dist, QuadratureSpec{});
    CHECK(std::abs(est.p_hat - analytic) <= 3.0 * est.std_error);
}

TEST_CASE("coverage margin leaves no truncation bias") {
    const ShapeDistribution dist = table_defaults();
    const Link link{{0, 0}, {250, 0}, 40.0, 1.5};
    const Link links[] = {link};
    const SampleRegion base = default_sample_region(links, dist);
    const SampleRegion larger{base.center, base.radius + 60.0};
    const LinkSet ls{{link}, {}};
    const Estimate a = estimate_p_all_blocked(ls, dist, base, 40000, 3);
    const Estimate b = estimate_p_all_blocked(ls, dist, larger, 40000, 3);
    CHECK(std::abs(a.p_hat - b.p_hat) <= a.std_error + b.std_error);
}

TEST_CASE("wilson interval brackets the estimate") {
    const Interval iv = wilson_interval(0.02, 1000, 3.0);
    CHECK(iv.lo >= 0.0);
    CHECK(iv.lo <= 0.02);
    CHECK(iv.hi >= 0.02);
    CHECK(iv.hi <= 1.0);
    const Interval full = wilson_interval(0.0, 0, 3.0);
    CHECK(full.lo == 0.0);
    CHECK(full.hi == 1.0);
}
