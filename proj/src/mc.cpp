#include "blockage/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "blockage/parallel.hpp"

namespace blockage {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double draw(const ScalarDist& dist, RngStream& rng) {
    return dist.is_deterministic() ? dist.upper() : rng.uniform01() * dist.upper();
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + 0x632BE59BD9B4E019ull * (index + 1));
}

double RngStream::uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::poisson(double mean) {
    // Sum of independent Poisson draws keeps Knuth's product method in a
    // range where exp(-chunk) is comfortably representable.
    std::uint64_t total = 0;
    while (mean > 30.0) {
        total += poisson(30.0);
        mean -= 30.0;
    }
    if (mean <= 0.0) return total;
    const double limit = std::exp(-mean);
    double prod = uniform01();
    std::uint64_t k = 0;
    while (prod > limit) {
        ++k;
        prod *= uniform01();
    }
    return total + k;
}

Interval wilson_interval(double p_hat, std::uint64_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p_hat + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

void sample_scene_into(const SampleRegion& region, const ShapeDistribution& dist,
                       RngStream& rng, std::vector<Blocker>& out) {
    out.clear();
    if (region.radius <= 0.0)
        throw std::invalid_argument("sample region radius must be > 0");
    const double area = kPi * region.radius * region.radius;
    const std::uint64_t count = rng.poisson(dist.density * area);
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        Blocker b;
        const double r = region.radius * std::sqrt(rng.uniform01());
        const double ang = 2.0 * kPi * rng.uniform01();
        b.center = region.center + Point2{r * std::cos(ang), r * std::sin(ang)};
        b.length = draw(dist.length, rng);
        b.width = draw(dist.width, rng);
        b.height = dist.height ? draw(*dist.height, rng)
                               : std::numeric_limits<double>::infinity();
        double theta = draw(dist.orientation, rng);
        theta = std::fmod(theta, kPi);
        if (theta < 0.0) theta += kPi;
        b.orientation = theta;
        out.push_back(b);
    }
}

std::vector<Blocker> sample_scene(const SampleRegion& region,
                                  const ShapeDistribution& dist,
                                  RngStream& rng) {
    std::vector<Blocker> out;
    sample_scene_into(region, dist, rng, out);
    return out;
}

bool blocks(const Blocker& blocker, const Link& link) {
    const double c = std::cos(blocker.orientation);
    const double s = std::sin(blocker.orientation);
    auto to_local = [&](Point2 p) {
        const Point2 r = p - blocker.center;
        return Point2{r.x * c + r.y * s, -r.x * s + r.y * c};
    };
    const Point2 a = to_local(link.a);
    const Point2 b = to_local(link.b);
    const Point2 dir = b - a;

    // Clip the segment parameter range against the footprint slabs.
    double t0 = 0.0, t1 = 1.0;
    const double starts[2] = {a.x, a.y};
    const double dirs[2] = {dir.x, dir.y};
    const double halves[2] = {0.5 * blocker.length, 0.5 * blocker.width};
    for (int axis = 0; axis < 2; ++axis) {
        const double p = starts[axis];
        const double d = dirs[axis];
        const double half = halves[axis];
        if (std::abs(d) < 1e-300) {
            if (p < -half || p > half) return false;
            continue;
        }
        double ta = (-half - p) / d;
        double tb = (half - p) / d;
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }
    const double dh = link.height_b - link.height_a;
    const double h_min = link.height_a + std::min(t0 * dh, t1 * dh);
    return h_min <= blocker.height;
}

SampleRegion default_sample_region(std::span<const Link> links,
                                   const ShapeDistribution& dist) {
    if (links.empty()) throw std::invalid_argument("link list is empty");
    Point2 lo{links[0].a.x, links[0].a.y};
    Point2 hi = lo;
    for (const Link& link : links) {
        for (Point2 p : {link.a, link.b}) {
            lo.x = std::min(lo.x, p.x);
            lo.y = std::min(lo.y, p.y);
            hi.x = std::max(hi.x, p.x);
            hi.y = std::max(hi.y, p.y);
        }
    }
    const Point2 center{0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
    double reach = 0.0;
    for (const Link& link : links)
        for (Point2 p : {link.a, link.b})
            reach = std::max(reach, distance(center, p));
    const double margin =
        0.5 * std::hypot(dist.length.upper(), dist.width.upper());
    return {center, std::max(reach + margin, 1.0)};
}

Estimate estimate_p_all_paths_blocked(std::span<const Link> links,
                                      std::span<const std::uint32_t> paths,
                                      std::uint32_t clear_mask,
                                      const ShapeDistribution& dist,
                                      const SampleRegion& region,
                                      std::uint64_t trials,
                                      std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    if (links.empty()) throw std::invalid_argument("link list is empty");
    if (links.size() > 32) throw std::invalid_argument("too many links");
    dist.validate();

    std::vector<std::size_t> clear_links;
    std::vector<std::size_t> free_links;
    for (std::size_t i = 0; i < links.size(); ++i) {
        if (clear_mask & (1u << i))
            clear_links.push_back(i);
        else
            free_links.push_back(i);
    }

    constexpr std::uint64_t kMaxAttemptsPerTrial = 10000;
    const std::size_t chunk = 512;
    const std::size_t nchunks = (trials + chunk - 1) / chunk;
    std::vector<std::uint64_t> chunk_successes(nchunks, 0);
    std::vector<std::uint64_t> chunk_attempts(nchunks, 0);

    parallel_for(nchunks, [&](std::size_t cidx) {
        std::uint64_t successes = 0;
        std::uint64_t attempts = 0;
        std::vector<Blocker> scene;
        const std::uint64_t t_hi =
            std::min<std::uint64_t>(trials, (cidx + 1) * chunk);
        for (std::uint64_t t = cidx * chunk; t < t_hi; ++t) {
            RngStream rng(substream_seed(seed, t));
            std::uint32_t blocked = 0;
            bool accepted = false;
            for (std::uint64_t attempt = 0; attempt < kMaxAttemptsPerTrial;
                 ++attempt) {
                ++attempts;
                sample_scene_into(region, dist, rng, scene);
                blocked = 0;
                bool rejected = false;
                for (const Blocker& b : scene) {
                    for (std::size_t i : clear_links) {
                        if (blocks(b, links[i])) {
                            rejected = true;
                            break;
                        }
                    }
                    if (rejected) break;
                    for (std::size_t i : free_links)
                        if (!(blocked & (1u << i)) && blocks(b, links[i]))
                            blocked |= 1u << i;
                }
                if (!rejected) {
                    accepted = true;
                    break;
                }
            }
            if (!accepted)
                throw std::runtime_error(
                    "conditioning acceptance rate below 1e-3: clear links are "
                    "almost surely blocked under this scenario");
            bool all_paths_blocked = true;
            for (std::uint32_t path : paths) {
                if ((path & blocked) == 0) {
                    all_paths_blocked = false;
                    break;
                }
            }
            if (all_paths_blocked) ++successes;
        }
        chunk_successes[cidx] = successes;
        chunk_attempts[cidx] = attempts;
    });

    std::uint64_t successes = 0, attempts = 0;
    for (std::size_t c = 0; c < nchunks; ++c) {
        successes += chunk_successes[c];
        attempts += chunk_attempts[c];
    }
    if (!clear_links.empty() &&
        static_cast<double>(trials) < 1e-3 * static_cast<double>(attempts))
        throw std::runtime_error(
            "conditioning acceptance rate below 1e-3 (" +
            std::to_string(trials) + " accepted of " +
            std::to_string(attempts) + " scenes)");

    Estimate est;
    est.trials = trials;
    est.p_hat = static_cast<double>(successes) / static_cast<double>(trials);
    est.std_error =
        std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(trials));
    return est;
}

Estimate estimate_p_all_blocked(const LinkSet& ls,
                                const ShapeDistribution& dist,
                                const SampleRegion& region,
                                std::uint64_t trials, std::uint64_t seed) {
    std::uint32_t clear_mask = 0;
    for (std::size_t idx : ls.clear) {
        if (idx >= ls.links.size())
            throw std::invalid_argument("clear index out of range");
        clear_mask |= 1u << idx;
    }
    std::vector<std::uint32_t> paths;
    for (std::size_t i = 0; i < ls.links.size(); ++i)
        if (!(clear_mask & (1u << i))) paths.push_back(1u << i);
    return estimate_p_all_paths_blocked(ls.links, paths, clear_mask, dist,
                                        region, trials, seed);
}

}  // namespace blockage
