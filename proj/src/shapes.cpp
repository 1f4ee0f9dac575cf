#include "blockage/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

#include "blockage/errors.hpp"

namespace blockage {

ScalarDist ScalarDist::uniform(double max) {
    if (!(max >= 0.0))
        throw std::invalid_argument("uniform distribution needs max >= 0");
    return ScalarDist(true, max);
}

ScalarDist ScalarDist::deterministic(double value) {
    if (!(value >= 0.0))
        throw std::invalid_argument("deterministic value must be >= 0");
    return ScalarDist(false, value);
}

double ScalarDist::mean() const { return uniform_ ? 0.5 * param_ : param_; }

double ScalarDist::cdf(double x) const {
    if (uniform_) {
        if (param_ == 0.0) return x >= 0.0 ? 1.0 : 0.0;
        return std::clamp(x / param_, 0.0, 1.0);
    }
    return x >= param_ ? 1.0 : 0.0;
}

double ScalarDist::cdf_integral(double a, double b) const {
    if (!(a <= b)) throw std::invalid_argument("cdf_integral needs a <= b");
    auto antiderivative = [this](double x) {
        if (x <= 0.0) return 0.0;
        if (uniform_) {
            if (param_ == 0.0) return x;
            if (x <= param_) return x * x / (2.0 * param_);
            return 0.5 * param_ + (x - param_);
        }
        return std::max(0.0, x - param_);
    };
    return antiderivative(b) - antiderivative(a);
}

void ShapeDistribution::validate() const {
    if (!(density >= 0.0))
        throw std::invalid_argument("blocker density must be >= 0");
    constexpr double pi = std::numbers::pi;
    if (orientation.is_uniform()) {
        if (std::abs(orientation.upper() - pi) > 1e-12)
            throw std::invalid_argument(
                "uniform orientation must span exactly [0, pi]");
    } else if (orientation.upper() > pi) {
        throw std::invalid_argument("orientation support must lie in [0, pi]");
    }
}

namespace detail {
double debug_eta_scale() {
    static const double scale = [] {
        const char* env = std::getenv("BLOCKAGE_DEBUG_ETA_SCALE");
        return env ? std::atof(env) : 1.0;
    }();
    return scale;
}
}  // namespace detail

double sweep_rate(const ShapeDistribution& dist) {
    constexpr double pi = std::numbers::pi;
    if (!dist.orientation.is_uniform() ||
        std::abs(dist.orientation.upper() - pi) > 1e-12)
        throw UnsupportedDistributionError(
            "sweep_rate closed form requires orientation uniform on [0, pi]");
    return 2.0 * dist.density * (dist.length.mean() + dist.width.mean()) / pi;
}

double footprint_coverage(const ShapeDistribution& dist) {
    return dist.density * dist.length.mean() * dist.width.mean();
}

double sweep_height_factor(double h_hi, double h_lo,
                           const std::optional<ScalarDist>& height) {
    if (!(h_lo >= 0.0) || !(h_hi >= h_lo))
        throw std::invalid_argument("need h_hi >= h_lo >= 0");
    if (!height) return 1.0;
    double eta;
    if (h_hi == h_lo) {
        eta = 1.0 - height->cdf(h_hi);
    } else {
        eta = 1.0 - height->cdf_integral(h_lo, h_hi) / (h_hi - h_lo);
    }
    return std::clamp(eta * detail::debug_eta_scale(), 0.0, 1.0);
}

double footprint_height_factor(double h_lo,
                               const std::optional<ScalarDist>& height) {
    if (!(h_lo >= 0.0)) throw std::invalid_argument("need h_lo >= 0");
    if (!height) return 1.0;
    return 1.0 - height->cdf(h_lo);
}

double expected_blockers(const Link& link, const ShapeDistribution& dist) {
    if (!(link.height_a >= 0.0) || !(link.height_b >= 0.0))
        throw std::invalid_argument("link endpoint heights must be >= 0");
    const double hi = std::max(link.height_a, link.height_b);
    const double lo = std::min(link.height_a, link.height_b);
    const double d = link.ground_distance();
    return sweep_height_factor(hi, lo, dist.height) * sweep_rate(dist) * d +
           footprint_height_factor(lo, dist.height) * footprint_coverage(dist);
}

double p_blocked(const Link& link, const ShapeDistribution& dist) {
    return -std::expm1(-expected_blockers(link, dist));
}

namespace detail {
void blocking_region_into(const Link& link, double l, double w, double h,
                          double theta, std::vector<Point2>& out) {
    const bool a_low = link.height_a <= link.height_b;
    const Point2 lo_pt = a_low ? link.a : link.b;
    const Point2 hi_pt = a_low ? link.b : link.a;
    const double lo = a_low ? link.height_a : link.height_b;
    const double hi = a_low ? link.height_b : link.height_a;

    if (h < lo) {
        out.clear();
        return;
    }
    if (h >= hi) {
        minkowski_segment_rect_into(link.a, link.b, l, w, theta, out);
        return;
    }
    const double frac = (h - lo) / (hi - lo);
    const Point2 end = lo_pt + frac * (hi_pt - lo_pt);
    minkowski_segment_rect_into(lo_pt, end, l, w, theta, out);
}
}  // namespace detail

ConvexPolygon blocking_region(const Link& link, double l, double w, double h,
                              double theta) {
    if (l < 0.0 || w < 0.0)
        throw std::invalid_argument("rectangle dimensions must be nonnegative");
    std::vector<Point2> out;
    detail::blocking_region_into(link, l, w, h, theta, out);
    return ConvexPolygon::unchecked(std::move(out));
}

}  // namespace blockage
