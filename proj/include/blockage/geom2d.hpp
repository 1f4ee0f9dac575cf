#pragma once

#include <span>
#include <vector>

namespace blockage {

// Absolute tolerance (meters) for vertex dedup and half-plane clipping.
inline constexpr double kGeomEps = 1e-9;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double distance(Point2 a, Point2 b);

// Convex region given by its vertices in counterclockwise order.
// An empty vertex list is the empty region; one or two vertices are
// admitted as degenerate (zero-area) regions.
class ConvexPolygon {
public:
    ConvexPolygon() = default;

    // Validates CCW order and convexity; reverses a clockwise ring.
    // Consecutive duplicates within kGeomEps are merged.
    static ConvexPolygon from_points(std::vector<Point2> vertices);

    // Trusted constructor for geometry kernels that already guarantee the
    // invariants (hull construction, clipping).
    static ConvexPolygon unchecked(std::vector<Point2> vertices);

    bool empty() const { return verts_.empty(); }
    std::size_t size() const { return verts_.size(); }
    const std::vector<Point2>& vertices() const { return verts_; }

    bool contains(Point2 p, double eps = kGeomEps) const;

private:
    std::vector<Point2> verts_;
};

// Convex hull (counterclockwise, strict turns) of a point set.
ConvexPolygon convex_hull(std::vector<Point2> pts);

// Region of centers of an l-by-w rectangle at global orientation theta
// (length axis along theta, width perpendicular) that intersects the
// segment [p0,p1]; the Minkowski sum of the segment with the rectangle.
// Hexagon in general; parallelogram when w=0; rectangle when p0=p1.
// Throws std::invalid_argument for negative l or w.
ConvexPolygon minkowski_segment_rect(Point2 p0, Point2 p1, double l, double w,
                                     double theta);

// Intersection by successive half-plane clipping of a against b's edges.
ConvexPolygon convex_intersect(const ConvexPolygon& a, const ConvexPolygon& b);

// Shoelace area; 0 for empty or degenerate polygons.
double polygon_area(const ConvexPolygon& p);

struct UnionAreaOptions {
    // Largest polygon count handled by exact inclusion-exclusion before the
    // adaptive grid fallback takes over.
    int max_exact = 10;
    // Target relative error of the fallback estimate.
    double grid_rel_tol = 1e-3;
};

// Exact area of the union by inclusion-exclusion over subset intersections
// (intersections of convex sets stay convex); adaptive grid estimate past
// options.max_exact polygons.
double union_area(std::span<const ConvexPolygon> polys,
                  const UnionAreaOptions& options = {});

namespace detail {

// Allocation-reusing kernels for hot loops. Rings are CCW vertex lists with
// the same conventions as ConvexPolygon.

double ring_area(const std::vector<Point2>& ring);

// out = subject clipped by every edge of the convex ring `clip`.
void intersect_rings(const std::vector<Point2>& subject,
                     const std::vector<Point2>& clip, std::vector<Point2>& out,
                     std::vector<Point2>& scratch);

// out = hull of the segment [p0,p1] dilated by the oriented rectangle.
void minkowski_segment_rect_into(Point2 p0, Point2 p1, double l, double w,
                                 double theta, std::vector<Point2>& out);

}  // namespace detail

}  // namespace blockage
