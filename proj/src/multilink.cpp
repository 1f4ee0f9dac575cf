#include "blockage/multilink.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "blockage/errors.hpp"
#include "blockage/parallel.hpp"

namespace blockage {

void QuadratureSpec::validate() const {
    if (nodes_l < 1 || nodes_w < 1 || nodes_h < 1 || nodes_theta < 1)
        throw std::invalid_argument("quadrature node counts must be >= 1");
}

namespace detail {

// Newton iteration on the Legendre polynomial roots.
void gauss_legendre_nodes(int n, std::vector<double>& x,
                          std::vector<double>& w) {
    constexpr double pi = std::numbers::pi;
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double z1, pp;
        do {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            z1 = z;
            z = z1 - p1 / pp;
        } while (std::abs(z - z1) > 1e-15);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

}  // namespace detail

namespace {

constexpr double kPi = std::numbers::pi;

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    detail::gauss_legendre_nodes(n, x, w);
}

struct Axis {
    std::vector<double> x;
    std::vector<double> w;  // includes the pdf mass of the dimension
};

// Quadrature for E[g(X)] with X ~ dist, optionally split at breakpoints.
// nodes_per_piece: true keeps the full node count in every piece (height
// axis); false spreads the budget over the pieces (orientation axis).
Axis axis_for(const ScalarDist& dist, int nodes,
              std::span<const double> breakpoints, bool nodes_per_piece) {
    Axis axis;
    if (dist.is_deterministic() || dist.upper() == 0.0) {
        axis.x = {dist.upper()};
        axis.w = {1.0};
        return axis;
    }
    const double max = dist.upper();
    std::vector<double> cuts{0.0, max};
    for (double b : breakpoints)
        if (b > 0.0 && b < max) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return b - a < 1e-12; }),
               cuts.end());
    const int pieces = static_cast<int>(cuts.size()) - 1;
    int per_piece = nodes;
    if (!nodes_per_piece && pieces > 1)
        per_piece = std::max(6, (nodes + pieces - 1) / pieces);
    std::vector<double> gx, gw;
    gauss_legendre(per_piece, gx, gw);
    for (int p = 0; p < pieces; ++p) {
        const double a = cuts[p], b = cuts[p + 1];
        for (int i = 0; i < per_piece; ++i) {
            axis.x.push_back(0.5 * (a + b) + 0.5 * (b - a) * gx[i]);
            axis.w.push_back(0.5 * (b - a) * gw[i] / max);  // pdf 1/max
        }
    }
    return axis;
}

Axis height_axis(const std::optional<ScalarDist>& height, int nodes,
                 std::span<const double> breakpoints) {
    if (!height) {
        Axis axis;
        axis.x = {std::numeric_limits<double>::infinity()};
        axis.w = {1.0};
        return axis;
    }
    return axis_for(*height, nodes, breakpoints, /*nodes_per_piece=*/true);
}

double azimuth_mod_pi(const Link& link) {
    const Point2 d = link.b - link.a;
    double az = std::fmod(std::atan2(d.y, d.x), kPi);
    if (az < 0.0) az += kPi;
    return az;
}

bool degenerate(const Link& link) {
    const Point2 d = link.b - link.a;
    return std::abs(d.x) < 1e-15 && std::abs(d.y) < 1e-15;
}

// Orientation angles where a link's region area has a kink: the link azimuth
// and its normal. Measured relative to `ref` so that the node layout is
// invariant under a global rotation of the geometry.
std::vector<double> theta_kinks(std::span<const Link> links, double ref) {
    std::vector<double> kinks;
    for (const Link& link : links) {
        if (degenerate(link)) continue;
        double az = std::fmod(azimuth_mod_pi(link) - ref, kPi);
        if (az < 0.0) az += kPi;
        kinks.push_back(az);
        kinks.push_back(std::fmod(az + 0.5 * kPi, kPi));
    }
    return kinks;
}

// Reference angle for the orientation axis: the first non-degenerate link's
// azimuth. The integrand is pi-periodic in theta, so integrating over
// [ref, ref + pi] is exact for the uniform law.
double theta_reference(std::span<const Link> links,
                       const ShapeDistribution& dist) {
    if (!dist.orientation.is_uniform()) return 0.0;
    for (const Link& link : links)
        if (!degenerate(link)) return azimuth_mod_pi(link);
    return 0.0;
}

std::vector<double> height_breaks(std::span<const Link> links) {
    std::vector<double> breaks;
    for (const Link& link : links) {
        breaks.push_back(link.height_a);
        breaks.push_back(link.height_b);
    }
    return breaks;
}

}  // namespace

std::vector<double> expected_union_blockers_masks(
    std::span<const Link> links, const ShapeDistribution& dist,
    const QuadratureSpec& quad, std::span<const std::uint32_t> masks) {
    if (links.empty()) throw std::invalid_argument("link list is empty");
    if (links.size() > static_cast<std::size_t>(kMaxLinks))
        throw UnsupportedSizeError("more links than the exact-evaluation cap");
    for (const Link& link : links)
        if (!(link.height_a >= 0.0) || !(link.height_b >= 0.0))
            throw std::invalid_argument("link endpoint heights must be >= 0");
    quad.validate();
    dist.validate();
    const std::uint32_t full = (1u << links.size()) - 1u;
    for (std::uint32_t m : masks)
        if (m > full) throw std::invalid_argument("mask selects absent links");

    const Axis axis_l = axis_for(dist.length, quad.nodes_l, {}, false);
    const Axis axis_w = axis_for(dist.width, quad.nodes_w, {}, false);
    const Axis axis_h =
        height_axis(dist.height, quad.nodes_h, height_breaks(links));
    const double theta_ref = theta_reference(links, dist);
    const Axis axis_t = axis_for(dist.orientation, quad.nodes_theta,
                                 theta_kinks(links, theta_ref), false);

    // Subset DP slots: every submask of a requested mask, ascending so the
    // mask with its lowest bit removed is already computed.
    std::vector<std::int32_t> slot(full + 1, -1);
    std::vector<std::uint32_t> order;
    for (std::uint32_t m : masks) {
        for (std::uint32_t sub = m; sub; sub = (sub - 1) & m)
            if (slot[sub] == -1) {
                slot[sub] = 0;
                order.push_back(sub);
            }
    }
    std::sort(order.begin(), order.end());
    for (std::size_t s = 0; s < order.size(); ++s)
        slot[order[s]] = static_cast<std::int32_t>(s);

    const std::size_t nl = axis_l.x.size(), nw = axis_w.x.size(),
                      nh = axis_h.x.size(), nt = axis_t.x.size();
    const std::size_t total = nl * nw * nh * nt;
    const std::size_t chunk = 2048;
    const std::size_t nchunks = total == 0 ? 0 : (total + chunk - 1) / chunk;

    std::vector<std::vector<double>> partial(nchunks);
    parallel_for(nchunks, [&](std::size_t c) {
        std::vector<double>& acc = partial[c];
        acc.assign(order.size(), 0.0);
        std::vector<std::vector<Point2>> rings(links.size());
        std::vector<std::vector<Point2>> inter(order.size());
        std::vector<Point2> scratch;
        const std::size_t hi_node = std::min(total, (c + 1) * chunk);
        for (std::size_t idx = c * chunk; idx < hi_node; ++idx) {
            std::size_t rem = idx;
            const std::size_t it = rem % nt;
            rem /= nt;
            const std::size_t ih = rem % nh;
            rem /= nh;
            const std::size_t iw = rem % nw;
            rem /= nw;
            const std::size_t il = rem;
            const double weight =
                axis_l.w[il] * axis_w.w[iw] * axis_h.w[ih] * axis_t.w[it];
            const double theta = axis_t.x[it] + theta_ref;
            for (std::size_t i = 0; i < links.size(); ++i)
                detail::blocking_region_into(links[i], axis_l.x[il],
                                             axis_w.x[iw], axis_h.x[ih],
                                             theta, rings[i]);
            for (std::size_t s = 0; s < order.size(); ++s) {
                const std::uint32_t mask = order[s];
                const int low = std::countr_zero(mask);
                const std::uint32_t rest = mask & (mask - 1u);
                std::vector<Point2>& dst = inter[s];
                if (rest == 0) {
                    dst = rings[low];
                } else {
                    const std::vector<Point2>& prev =
                        inter[static_cast<std::size_t>(slot[rest])];
                    if (prev.size() < 3) {
                        dst.clear();
                    } else {
                        detail::intersect_rings(prev, rings[low], dst, scratch);
                    }
                }
                if (dst.size() >= 3) acc[s] += weight * detail::ring_area(dst);
            }
        }
    });

    std::vector<double> inter_integral(order.size(), 0.0);
    for (const auto& acc : partial)
        for (std::size_t s = 0; s < order.size(); ++s)
            inter_integral[s] += acc[s];

    std::vector<double> out;
    out.reserve(masks.size());
    for (std::uint32_t m : masks) {
        double sum = 0.0;
        for (std::uint32_t sub = m; sub; sub = (sub - 1) & m) {
            const double a = inter_integral[static_cast<std::size_t>(slot[sub])];
            sum += (std::popcount(sub) % 2 == 1) ? a : -a;
        }
        out.push_back(dist.density * sum);
    }
    return out;
}

double expected_blockers_union(std::span<const Link> links,
                               const ShapeDistribution& dist,
                               const QuadratureSpec& quad) {
    const std::uint32_t full = (1u << links.size()) - 1u;
    return expected_union_blockers_masks(links, dist, quad, {{full}})[0];
}

std::vector<double> conditional_ok_terms(std::span<const Link> links,
                                         std::span<const std::uint32_t> events,
                                         std::uint32_t clear_mask,
                                         const ShapeDistribution& dist,
                                         const QuadratureSpec& quad) {
    const std::size_t n_events = events.size();
    if (n_events > 20)
        throw UnsupportedSizeError("too many composite events");
    const std::size_t combos = std::size_t{1} << n_events;
    std::vector<std::uint32_t> masks(combos, clear_mask);
    for (std::size_t g = 1; g < combos; ++g) {
        std::uint32_t m = clear_mask;
        for (std::size_t e = 0; e < n_events; ++e)
            if (g & (std::size_t{1} << e)) m |= events[e];
        masks[g] = m;
    }
    std::vector<double> expectations;
    if (clear_mask == 0) {
        // Mask 0 contributes E = 0; compute the rest.
        std::vector<std::uint32_t> nonzero(masks.begin() + 1, masks.end());
        std::vector<double> rest;
        if (!nonzero.empty())
            rest = expected_union_blockers_masks(links, dist, quad, nonzero);
        expectations.assign(combos, 0.0);
        for (std::size_t g = 1; g < combos; ++g)
            expectations[g] = masks[g] == 0 ? 0.0 : rest[g - 1];
    } else {
        expectations = expected_union_blockers_masks(links, dist, quad, masks);
    }
    std::vector<double> terms(combos, 1.0);
    for (std::size_t g = 1; g < combos; ++g)
        terms[g] = std::exp(-(expectations[g] - expectations[0]));
    return terms;
}

double all_fail_from_ok_terms(std::span<const double> terms,
                              std::uint32_t active_mask) {
    double any_ok = 0.0;
    for (std::uint32_t g = active_mask; g; g = (g - 1) & active_mask) {
        const double t = terms[g];
        any_ok += (std::popcount(g) % 2 == 1) ? t : -t;
    }
    return 1.0 - any_ok;
}

namespace {

std::uint32_t clear_mask_of(const LinkSet& ls) {
    std::uint32_t mask = 0;
    for (std::size_t idx : ls.clear) {
        if (idx >= ls.links.size())
            throw std::invalid_argument("clear index out of range");
        mask |= 1u << idx;
    }
    return mask;
}

}  // namespace

double p_all_blocked_raw(const LinkSet& ls, const ShapeDistribution& dist,
                         const QuadratureSpec& quad) {
    if (ls.links.empty()) throw std::invalid_argument("link set is empty");
    const std::uint32_t clear = clear_mask_of(ls);
    std::vector<std::uint32_t> events;
    for (std::size_t i = 0; i < ls.links.size(); ++i)
        if (!(clear & (1u << i))) events.push_back(1u << i);
    if (events.empty()) return 1.0;  // vacuously all blocked
    const std::vector<double> terms =
        conditional_ok_terms(ls.links, events, clear, dist, quad);
    const std::uint32_t active = (1u << events.size()) - 1u;
    return all_fail_from_ok_terms(terms, active);
}

double p_all_blocked(const LinkSet& ls, const ShapeDistribution& dist,
                     const QuadratureSpec& quad) {
    return std::clamp(p_all_blocked_raw(ls, dist, quad), 0.0, 1.0);
}

double p_all_blocked_independent(const LinkSet& ls,
                                 const ShapeDistribution& dist,
                                 const QuadratureSpec& quad) {
    if (ls.links.empty()) throw std::invalid_argument("link set is empty");
    const std::uint32_t clear = clear_mask_of(ls);
    std::vector<std::uint32_t> masks{clear};
    for (std::size_t i = 0; i < ls.links.size(); ++i)
        if (!(clear & (1u << i))) masks.push_back(clear | (1u << i));
    if (masks.size() == 1) return 1.0;

    std::vector<double> expectations;
    if (clear == 0) {
        std::vector<std::uint32_t> nonzero(masks.begin() + 1, masks.end());
        std::vector<double> rest =
            expected_union_blockers_masks(ls.links, dist, quad, nonzero);
        expectations.assign(masks.size(), 0.0);
        std::copy(rest.begin(), rest.end(), expectations.begin() + 1);
    } else {
        expectations =
            expected_union_blockers_masks(ls.links, dist, quad, masks);
    }
    double product = 1.0;
    for (std::size_t k = 1; k < masks.size(); ++k)
        product *= -std::expm1(-(expectations[k] - expectations[0]));
    return product;
}

}  // namespace blockage
