#include "blockage/geom2d.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace blockage {

double distance(Point2 a, Point2 b) { return std::hypot(b.x - a.x, b.y - a.y); }

namespace {

bool near(Point2 a, Point2 b) {
    return std::abs(a.x - b.x) <= kGeomEps && std::abs(a.y - b.y) <= kGeomEps;
}

double signed_area2(const std::vector<Point2>& v) {
    double s = 0.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const Point2& p = v[i];
        const Point2& q = v[(i + 1) % n];
        s += p.x * q.y - p.y * q.x;
    }
    return s;
}

void dedup_ring(std::vector<Point2>& v) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (k == 0 || !near(v[k - 1], v[i])) v[k++] = v[i];
    }
    while (k > 1 && near(v[0], v[k - 1])) --k;
    v.resize(k);
}

}  // namespace

ConvexPolygon ConvexPolygon::from_points(std::vector<Point2> vertices) {
    for (const Point2& p : vertices) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("polygon vertex is not finite");
    }
    dedup_ring(vertices);
    if (vertices.size() >= 3) {
        if (signed_area2(vertices) < 0.0)
            std::reverse(vertices.begin(), vertices.end());
        const std::size_t n = vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            Point2 a = vertices[i];
            Point2 b = vertices[(i + 1) % n];
            Point2 c = vertices[(i + 2) % n];
            if (cross(b - a, c - b) < -kGeomEps)
                throw std::invalid_argument("polygon is not convex CCW");
        }
    }
    ConvexPolygon poly;
    poly.verts_ = std::move(vertices);
    return poly;
}

ConvexPolygon ConvexPolygon::unchecked(std::vector<Point2> vertices) {
    ConvexPolygon poly;
    poly.verts_ = std::move(vertices);
    return poly;
}

bool ConvexPolygon::contains(Point2 p, double eps) const {
    const std::size_t n = verts_.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        Point2 a = verts_[i];
        Point2 b = verts_[(i + 1) % n];
        if (cross(b - a, p - a) < -eps) return false;
    }
    return true;
}

namespace {

// Monotone chain over points sorted by (x, y); strict turns only.
void hull_of_sorted(std::span<const Point2> pts, std::vector<Point2>& hull) {
    const std::size_t n = pts.size();
    hull.clear();
    if (n <= 2) {
        hull.assign(pts.begin(), pts.end());
        return;
    }
    hull.resize(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 &&
               cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0)
            --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower &&
               cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
}

}  // namespace

ConvexPolygon convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](Point2 a, Point2 b) { return near(a, b); }),
              pts.end());
    std::vector<Point2> hull;
    hull_of_sorted(pts, hull);
    return ConvexPolygon::unchecked(std::move(hull));
}

namespace detail {

void minkowski_segment_rect_into(Point2 p0, Point2 p1, double l, double w,
                                 double theta, std::vector<Point2>& out) {
    const Point2 u{std::cos(theta), std::sin(theta)};
    const Point2 v{-u.y, u.x};
    const double hl = 0.5 * l;
    const double hw = 0.5 * w;
    std::array<Point2, 8> pts;
    std::size_t m = 0;
    for (Point2 e : {p0, p1}) {
        pts[m++] = e + hl * u + hw * v;
        pts[m++] = e + hl * u - hw * v;
        pts[m++] = e - hl * u + hw * v;
        pts[m++] = e - hl * u - hw * v;
    }
    std::sort(pts.begin(), pts.begin() + m, [](Point2 a, Point2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    auto last = std::unique(pts.begin(), pts.begin() + m,
                            [](Point2 a, Point2 b) { return near(a, b); });
    hull_of_sorted({pts.data(), static_cast<std::size_t>(last - pts.begin())},
                   out);
}

double ring_area(const std::vector<Point2>& ring) {
    if (ring.size() < 3) return 0.0;
    return 0.5 * std::abs(signed_area2(ring));
}

namespace {

// Sutherland-Hodgman clip of `in` against the half-plane left of a->b.
void clip_half_plane(const std::vector<Point2>& in, Point2 a, Point2 b,
                     std::vector<Point2>& out) {
    out.clear();
    const std::size_t n = in.size();
    if (n == 0) return;
    const Point2 e = b - a;
    double dprev = cross(e, in[n - 1] - a);
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& q = in[i];
        const Point2& p = in[(i + n - 1) % n];
        const double dq = cross(e, q - a);
        if (dq >= -kGeomEps) {
            if (dprev < -kGeomEps) {
                const double t = dprev / (dprev - dq);
                out.push_back(p + t * (q - p));
            }
            out.push_back(q);
        } else if (dprev >= -kGeomEps) {
            const double t = dprev / (dprev - dq);
            out.push_back(p + t * (q - p));
        }
        dprev = dq;
    }
    dedup_ring(out);
}

}  // namespace

void intersect_rings(const std::vector<Point2>& subject,
                     const std::vector<Point2>& clip, std::vector<Point2>& out,
                     std::vector<Point2>& scratch) {
    const std::size_t m = clip.size();
    if (subject.empty() || m < 3) {
        out.clear();
        return;
    }
    scratch = subject;
    for (std::size_t i = 0; i < m && !scratch.empty(); ++i) {
        clip_half_plane(scratch, clip[i], clip[(i + 1) % m], out);
        scratch.swap(out);
    }
    out.swap(scratch);
}

}  // namespace detail

ConvexPolygon minkowski_segment_rect(Point2 p0, Point2 p1, double l, double w,
                                     double theta) {
    if (l < 0.0 || w < 0.0)
        throw std::invalid_argument("rectangle dimensions must be nonnegative");
    std::vector<Point2> hull;
    detail::minkowski_segment_rect_into(p0, p1, l, w, theta, hull);
    return ConvexPolygon::unchecked(std::move(hull));
}

double polygon_area(const ConvexPolygon& p) {
    return detail::ring_area(p.vertices());
}

ConvexPolygon convex_intersect(const ConvexPolygon& a, const ConvexPolygon& b) {
    std::vector<Point2> out, scratch;
    detail::intersect_rings(a.vertices(), b.vertices(), out, scratch);
    return ConvexPolygon::unchecked(std::move(out));
}

namespace {

struct BBox {
    double xmin = std::numeric_limits<double>::infinity();
    double ymin = std::numeric_limits<double>::infinity();
    double xmax = -std::numeric_limits<double>::infinity();
    double ymax = -std::numeric_limits<double>::infinity();

    void grow(Point2 p) {
        xmin = std::min(xmin, p.x);
        ymin = std::min(ymin, p.y);
        xmax = std::max(xmax, p.x);
        ymax = std::max(ymax, p.y);
    }
    bool valid() const { return xmin <= xmax && ymin <= ymax; }
};

double union_area_inclusion_exclusion(std::span<const ConvexPolygon> polys) {
    const int m = static_cast<int>(polys.size());
    const std::uint32_t full = (1u << m) - 1u;
    // inter[mask] holds the intersection of the polygons selected by mask.
    std::vector<std::vector<Point2>> inter(full + 1);
    std::vector<Point2> scratch;
    double total = 0.0;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        const int low = std::countr_zero(mask);
        const std::uint32_t rest = mask & (mask - 1u);
        const std::vector<Point2>& base = polys[low].vertices();
        if (rest == 0) {
            inter[mask] = base;
        } else if (inter[rest].empty()) {
            continue;  // supersets of an empty intersection stay empty
        } else {
            detail::intersect_rings(inter[rest], base, inter[mask], scratch);
            if (inter[mask].empty()) continue;
        }
        const double area = detail::ring_area(inter[mask]);
        total += (std::popcount(mask) % 2 == 1) ? area : -area;
    }
    return std::max(total, 0.0);
}

// Recursive cell refinement: cells met by a single polygon are clipped
// exactly, cells inside some polygon count in full, and only cells where two
// or more polygon boundaries interact recurse.
double union_area_cell(std::span<const ConvexPolygon> polys,
                       std::span<const std::size_t> active, Point2 lo,
                       Point2 hi, double abs_tol, int depth) {
    const std::vector<Point2> cell = {
        {lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}};
    const double cell_area = (hi.x - lo.x) * (hi.y - lo.y);
    std::vector<std::size_t> touching;
    std::vector<Point2> out, scratch;
    double max_single = 0.0;
    for (std::size_t idx : active) {
        const ConvexPolygon& poly = polys[idx];
        bool cell_inside = true;
        for (const Point2& c : cell)
            if (!poly.contains(c)) {
                cell_inside = false;
                break;
            }
        if (cell_inside) return cell_area;
        detail::intersect_rings(cell, poly.vertices(), out, scratch);
        const double a = detail::ring_area(out);
        if (a > 0.0) {
            touching.push_back(idx);
            max_single = std::max(max_single, a);
        }
    }
    if (touching.empty()) return 0.0;
    if (touching.size() == 1) return max_single;
    if (depth <= 0 || cell_area <= abs_tol) {
        // Covered area is bounded by the best single clip and the full cell.
        return 0.5 * (max_single + cell_area);
    }
    const Point2 mid{0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
    double sum = 0.0;
    sum += union_area_cell(polys, touching, lo, mid, abs_tol, depth - 1);
    sum += union_area_cell(polys, touching, {mid.x, lo.y}, {hi.x, mid.y},
                           abs_tol, depth - 1);
    sum += union_area_cell(polys, touching, {lo.x, mid.y}, {mid.x, hi.y},
                           abs_tol, depth - 1);
    sum += union_area_cell(polys, touching, mid, hi, abs_tol, depth - 1);
    return sum;
}

double union_area_grid(std::span<const ConvexPolygon> polys, double rel_tol) {
    BBox box;
    double max_single = 0.0;
    for (const ConvexPolygon& p : polys) {
        for (const Point2& v : p.vertices()) box.grow(v);
        max_single = std::max(max_single, polygon_area(p));
    }
    if (!box.valid() || max_single == 0.0) return 0.0;
    std::vector<std::size_t> active(polys.size());
    for (std::size_t i = 0; i < polys.size(); ++i) active[i] = i;
    const double abs_tol = rel_tol * max_single * 1e-4;
    return union_area_cell(polys, active, {box.xmin, box.ymin},
                           {box.xmax, box.ymax}, abs_tol, 40);
}

}  // namespace

double union_area(std::span<const ConvexPolygon> polys,
                  const UnionAreaOptions& options) {
    std::vector<ConvexPolygon> kept;
    kept.reserve(polys.size());
    for (const ConvexPolygon& p : polys)
        if (p.size() >= 3) kept.push_back(p);
    if (kept.empty()) return 0.0;
    if (kept.size() == 1) return polygon_area(kept[0]);
    if (static_cast<int>(kept.size()) <= options.max_exact)
        return union_area_inclusion_exclusion(kept);
    return union_area_grid(kept, options.grid_rel_tol);
}

}  // namespace blockage
