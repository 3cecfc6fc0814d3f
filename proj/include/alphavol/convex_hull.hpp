#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

#include "alphavol/geom.hpp"
#include "alphavol/predicates.hpp"

namespace alphavol {

struct BoundingBox {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
    double area() const { return width() * height(); }
    bool contains(const Point& p) const {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }
};

inline BoundingBox bounding_box(std::span<const Point> pts) {
    if (pts.empty()) throw std::invalid_argument("bounding_box: empty input");
    BoundingBox b{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
    for (const auto& p : pts) {
        b.min_x = std::min(b.min_x, p.x);
        b.min_y = std::min(b.min_y, p.y);
        b.max_x = std::max(b.max_x, p.x);
        b.max_y = std::max(b.max_y, p.y);
    }
    return b;
}

/// Convex polygon, vertices counterclockwise with no three consecutive collinear.
/// Degenerate hulls (one point, or a segment given by its two endpoints) are allowed.
class ConvexPolygon {
public:
    ConvexPolygon() = default;
    explicit ConvexPolygon(std::vector<Point> ccw_vertices) : vertices_(std::move(ccw_vertices)) {}

    const std::vector<Point>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    bool empty() const { return vertices_.empty(); }

    /// Closed containment test (boundary counts as inside).
    bool contains(const Point& p) const {
        const std::size_t n = vertices_.size();
        if (n == 0) return false;
        if (n == 1) return p == vertices_[0];
        if (n == 2) {
            const Point& a = vertices_[0];
            const Point& b = vertices_[1];
            if (orientation(a, b, p) != 0) return false;
            return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) && p.y >= std::min(a.y, b.y) &&
                   p.y <= std::max(a.y, b.y);
        }
        for (std::size_t i = 0; i < n; ++i)
            if (orientation(vertices_[i], vertices_[(i + 1) % n], p) < 0) return false;
        return true;
    }

private:
    std::vector<Point> vertices_;
};

/// Shoelace area; zero for degenerate polygons.
inline double polygon_area(const ConvexPolygon& poly) {
    const auto& v = poly.vertices();
    if (v.size() < 3) return 0.0;
    double sum = 0.0;
    const Point& o = v[0];
    for (std::size_t i = 1; i + 1 < v.size(); ++i) sum += cross(v[i] - o, v[i + 1] - o);
    return std::max(0.0, 0.5 * sum);
}

/// Andrew's monotone chain with exact orientation; collinear points are dropped.
inline ConvexPolygon convex_hull(std::span<const Point> points) {
    if (points.empty()) throw std::invalid_argument("empty sample");
    std::vector<Point> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return ConvexPolygon(pts);

    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && orientation(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && orientation(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    // all collinear: the chain collapses to the two extreme points
    return ConvexPolygon(std::move(hull));
}

}  // namespace alphavol
