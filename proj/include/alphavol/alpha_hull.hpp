#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "alphavol/convex_hull.hpp"
#include "alphavol/geom.hpp"
#include "alphavol/grid_index.hpp"
#include "alphavol/numeric.hpp"
#include "alphavol/predicates.hpp"

namespace alphavol {

/// Certified bounds on a Lebesgue area: lower <= true area <= upper.
struct AreaEstimate {
    double lower = 0.0;
    double upper = 0.0;
    double value = 0.0;           ///< midpoint of [lower, upper]
    double tolerance_used = 0.0;  ///< absolute tolerance; upper - lower <= 2 * tolerance_used
    std::size_t cells_processed = 0;

    double half_width() const { return 0.5 * (upper - lower); }
};

/// Area tolerance, either absolute or as a fraction of the outer-hull bounding-box area.
class Tolerance {
public:
    static Tolerance absolute(double value) { return Tolerance(value, false); }
    static Tolerance relative(double fraction) { return Tolerance(fraction, true); }

    bool is_relative() const { return relative_; }
    double amount() const { return amount_; }

private:
    Tolerance(double v, bool rel) : amount_(v), relative_(rel) {
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("tolerance must be positive");
    }
    double amount_;
    bool relative_;
};

namespace detail {

// A free-boundary arc in a form suited to repeated distance queries.
struct FreeArc {
    double cx = 0.0, cy = 0.0;
    double fx = 1.0, fy = 0.0;  // unit vector to the start point
    double tx = 1.0, ty = 0.0;  // unit vector to the end point
    bool full = false;
    bool major = false;  // extent > pi

    bool in_range(double vx, double vy) const {
        if (full) return true;
        if (!major) return fx * vy - fy * vx >= 0.0 && vx * ty - vy * tx >= 0.0;
        // the complement is the open minor sector from end to start
        return !(tx * vy - ty * vx > 0.0 && vx * fy - vy * fx > 0.0);
    }

    double distance(double px, double py, double radius) const {
        const double vx = px - cx;
        const double vy = py - cy;
        const double r = std::sqrt(vx * vx + vy * vy);
        if (r == 0.0) return radius;
        if (in_range(vx, vy)) return std::fabs(radius - r);
        const double sx = px - (cx + radius * fx), sy = py - (cy + radius * fy);
        const double ex = px - (cx + radius * tx), ey = py - (cy + radius * ty);
        return std::sqrt(std::min(sx * sx + sy * sy, ex * ex + ey * ey));
    }
};

inline FreeArc make_free_arc(const Arc& arc) {
    FreeArc f;
    f.cx = arc.center.x;
    f.cy = arc.center.y;
    f.full = arc.interval.is_full();
    f.major = arc.interval.extent() > std::numbers::pi;
    f.fx = std::cos(arc.interval.start());
    f.fy = std::sin(arc.interval.start());
    f.tx = std::cos(arc.interval.end());
    f.ty = std::sin(arc.interval.end());
    return f;
}

inline BoundingBox arc_bounds(const Arc& arc) {
    const Point s = arc.start_point();
    const Point e = arc.end_point();
    BoundingBox b{std::min(s.x, e.x), std::min(s.y, e.y), std::max(s.x, e.x), std::max(s.y, e.y)};
    for (int q = 0; q < 4; ++q) {
        const double a = q * std::numbers::pi / 2.0;
        if (arc.interval.contains(a)) {
            const Point p = arc.point_at(a);
            b.min_x = std::min(b.min_x, p.x);
            b.min_y = std::min(b.min_y, p.y);
            b.max_x = std::max(b.max_x, p.x);
            b.max_y = std::max(b.max_y, p.y);
        }
    }
    return b;
}

// Dense bucket grid over arcs with a Chebyshev distance transform of the
// occupied cells, used for nearest-arc ring searches.
class ArcGrid {
public:
    ArcGrid() = default;

    ArcGrid(const std::vector<Arc>& arcs, const BoundingBox& box, double cell) : box_(box), cell_(cell) {
        nx_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(box.width() / cell)));
        ny_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(box.height() / cell)));
        const auto ncell = static_cast<std::size_t>(nx_ * ny_);
        std::vector<std::uint32_t> counts(ncell + 1, 0);
        std::vector<std::array<std::int64_t, 4>> spans(arcs.size());
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            const BoundingBox b = arc_bounds(arcs[i]);
            spans[i] = {to_cell(b.min_x, box_.min_x, nx_), to_cell(b.min_y, box_.min_y, ny_),
                        to_cell(b.max_x, box_.min_x, nx_), to_cell(b.max_y, box_.min_y, ny_)};
            for (auto y = spans[i][1]; y <= spans[i][3]; ++y)
                for (auto x = spans[i][0]; x <= spans[i][2]; ++x) ++counts[static_cast<std::size_t>(y * nx_ + x) + 1];
        }
        for (std::size_t c = 1; c < counts.size(); ++c) counts[c] += counts[c - 1];
        offsets_ = counts;
        items_.resize(counts.back());
        for (std::size_t i = 0; i < arcs.size(); ++i)
            for (auto y = spans[i][1]; y <= spans[i][3]; ++y)
                for (auto x = spans[i][0]; x <= spans[i][2]; ++x)
                    items_[counts[static_cast<std::size_t>(y * nx_ + x)]++] = static_cast<std::uint32_t>(i);

        // two-pass chamfer with unit weights gives the exact Chebyshev distance
        const std::int32_t far = static_cast<std::int32_t>(nx_ + ny_ + 2);
        ring_.assign(ncell, far);
        for (std::size_t c = 0; c < ncell; ++c)
            if (offsets_[c + 1] > offsets_[c]) ring_[c] = 0;
        auto at = [&](std::int64_t x, std::int64_t y) -> std::int32_t& { return ring_[static_cast<std::size_t>(y * nx_ + x)]; };
        for (std::int64_t y = 0; y < ny_; ++y)
            for (std::int64_t x = 0; x < nx_; ++x) {
                std::int32_t& v = at(x, y);
                if (x > 0) v = std::min(v, at(x - 1, y) + 1);
                if (y > 0) {
                    v = std::min(v, at(x, y - 1) + 1);
                    if (x > 0) v = std::min(v, at(x - 1, y - 1) + 1);
                    if (x + 1 < nx_) v = std::min(v, at(x + 1, y - 1) + 1);
                }
            }
        for (std::int64_t y = ny_; y-- > 0;)
            for (std::int64_t x = nx_; x-- > 0;) {
                std::int32_t& v = at(x, y);
                if (x + 1 < nx_) v = std::min(v, at(x + 1, y) + 1);
                if (y + 1 < ny_) {
                    v = std::min(v, at(x, y + 1) + 1);
                    if (x + 1 < nx_) v = std::min(v, at(x + 1, y + 1) + 1);
                    if (x > 0) v = std::min(v, at(x - 1, y + 1) + 1);
                }
            }
    }

    bool covers(double px, double py) const {
        return px >= box_.min_x && px <= box_.max_x && py >= box_.min_y && py <= box_.max_y;
    }

    // Smallest arc distance from p, searching outward ring by ring. Returns as
    // soon as a distance below `early_exit` is seen; distances of `limit` or
    // more may be reported as +inf.
    double nearest(const std::vector<FreeArc>& arcs, double px, double py, double radius, double early_exit,
                   double limit) const {
        double best = std::numeric_limits<double>::infinity();
        if (!covers(px, py)) {
            for (const auto& a : arcs) {
                best = std::min(best, a.distance(px, py, radius));
                if (best < early_exit) return best;
            }
            return best;
        }
        const std::int64_t cx = to_cell(px, box_.min_x, nx_);
        const std::int64_t cy = to_cell(py, box_.min_y, ny_);
        const std::int64_t kmax = std::max(nx_, ny_);
        for (std::int64_t k = ring_[static_cast<std::size_t>(cy * nx_ + cx)]; k <= kmax; ++k) {
            if (static_cast<double>(k - 1) * cell_ >= std::min(best, limit)) break;
            auto scan = [&](std::int64_t x, std::int64_t y) {
                if (x < 0 || y < 0 || x >= nx_ || y >= ny_) return false;
                const auto c = static_cast<std::size_t>(y * nx_ + x);
                for (std::uint32_t i = offsets_[c]; i < offsets_[c + 1]; ++i) {
                    const double d = arcs[items_[i]].distance(px, py, radius);
                    if (d < best) {
                        best = d;
                        if (best < early_exit) return true;
                    }
                }
                return false;
            };
            if (k == 0) {
                if (scan(cx, cy)) return best;
                continue;
            }
            for (std::int64_t x = cx - k; x <= cx + k; ++x)
                if (scan(x, cy - k) || scan(x, cy + k)) return best;
            for (std::int64_t y = cy - k + 1; y <= cy + k - 1; ++y)
                if (scan(cx - k, y) || scan(cx + k, y)) return best;
        }
        return best;
    }

private:
    std::int64_t to_cell(double v, double origin, std::int64_t n) const {
        const double f = std::floor((v - origin) / cell_);
        if (!(f > 0.0)) return 0;
        if (f >= static_cast<double>(n - 1)) return n - 1;
        return static_cast<std::int64_t>(f);
    }

    BoundingBox box_;
    double cell_ = 1.0;
    std::int64_t nx_ = 1, ny_ = 1;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> items_;
    std::vector<std::int32_t> ring_;
};

// Removes points within `tol` of an earlier point, preserving input order.
inline std::vector<Point> dedupe_points(std::span<const Point> pts, double tol) {
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pts[a].x < pts[b].x || (pts[a].x == pts[b].x && a < b);
    });
    std::vector<char> dropped(pts.size(), 0);
    for (std::size_t u = 0; u < order.size(); ++u) {
        const std::size_t i = order[u];
        if (dropped[i]) continue;
        for (std::size_t w = u + 1; w < order.size() && pts[order[w]].x - pts[i].x <= tol; ++w) {
            const std::size_t j = order[w];
            if (!dropped[j] && distance(pts[i], pts[j]) <= tol) dropped[std::max(i, j)] = 1;
        }
    }
    std::vector<Point> out;
    out.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (!dropped[i]) out.push_back(pts[i]);
    return out;
}

}  // namespace detail

/// The alpha-convex hull of a finite planar sample: the complement of the union
/// of all open disks of radius alpha that contain no sample point.
///
/// Internally this is the morphological closing of the sample. With the free
/// space F = {y : dist(y, sample) >= alpha}, a point x belongs to the hull iff
/// dist(x, F) >= alpha. The boundary of F is a union of circle arcs of radius
/// alpha around sample points (the uncovered parts of each circle), so
/// dist(x, F) is either 0 (x in F) or the distance to the nearest such arc.
/// That distance, the clearance, is 1-Lipschitz, which makes both exact
/// membership and certified area bounds possible.
///
/// Immutable after build; all queries are const and thread-safe.
class AlphaHull {
public:
    static constexpr double kDefaultRelativeTolerance = 1e-4;
    static constexpr int kMaxDepth = 40;
    static constexpr double kDuplicateTolerance = 1e-12;
    /// Relative slack on the membership threshold, absorbing rounding in
    /// arc-endpoint distances (sample points must test as members).
    static constexpr double kMembershipSlack = 1e-10;

    static AlphaHull build(std::span<const Point> points, double alpha) {
        if (points.empty()) throw std::invalid_argument("empty sample");
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
        for (const auto& p : points)
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw std::invalid_argument("non-finite coordinate");

        AlphaHull h;
        h.alpha_ = alpha;
        h.points_ = detail::dedupe_points(points, kDuplicateTolerance);
        h.grid_ = GridIndex(h.points_, alpha);
        h.outer_hull_ = convex_hull(h.points_);
        h.outer_box_ = bounding_box(h.outer_hull_.vertices());
        h.build_free_boundary();
        return h;
    }

    double alpha() const { return alpha_; }
    const std::vector<Point>& points() const { return points_; }
    const GridIndex& grid() const { return grid_; }
    const ConvexPolygon& outer_hull() const { return outer_hull_; }

    /// Arcs of radius alpha forming the boundary of the free space, ordered by
    /// (point index, start angle).
    const std::vector<Arc>& free_boundary() const { return free_boundary_; }
    std::vector<Arc> boundary_arcs() const { return free_boundary_; }

    /// Index of the sample point owning each free-boundary arc.
    const std::vector<std::uint32_t>& arc_owners() const { return arc_owner_; }

    /// dist(x, F). Zero when x is itself a legal empty-disk center.
    double clearance(const Point& x) const {
        if (!near_sample(x)) return 0.0;
        const double inf = std::numeric_limits<double>::infinity();
        return arc_grid_.nearest(fast_arcs_, x.x, x.y, alpha_, -inf, inf);
    }

    /// Closed-hull membership: clearance(x) >= alpha.
    bool contains(const Point& x) const {
        if (!outer_box_.contains(x)) return false;
        if (!near_sample(x)) return false;
        const double threshold = alpha_ * (1.0 - kMembershipSlack);
        const double band = alpha_ * (1.0 + kMembershipSlack);
        const double c = arc_grid_.nearest(fast_arcs_, x.x, x.y, alpha_, threshold, band);
        if (c < threshold) return false;
        // inside the slack band a point may sit just outside conv(X)
        return c >= band || outer_hull_.contains(x);
    }

    /// Default absolute area tolerance: a fixed fraction of the outer-hull bounding-box area.
    double default_tolerance() const { return resolve(Tolerance::relative(kDefaultRelativeTolerance)); }

    double resolve(const Tolerance& tol) const {
        if (!tol.is_relative()) return tol.amount();
        const double box_area = outer_box_.area();
        return box_area > 0.0 ? tol.amount() * box_area : tol.amount();
    }

    AreaEstimate area(const Tolerance& tol) const { return area(resolve(tol)); }

    /// Certified area bounds by adaptive quadtree over the outer-hull bounding box.
    ///
    /// A cell with center c and half-diagonal rho is inside when
    /// clearance(c) >= alpha + rho and outside when clearance(c) + rho < alpha
    /// (or when it lies entirely in F, or outside the convex hull). Levels are
    /// refined breadth-first until the undecided area is at most 2 * tolerance;
    /// the undecided remainder counts toward the upper bound only.
    ///
    /// Each cell carries the arcs within alpha + rho of its center and the
    /// samples within alpha + rho; children inherit the survivors, so the lists
    /// shrink to a handful near the boundary.
    AreaEstimate area(double tolerance) const {
        if (!(tolerance > 0.0) || !std::isfinite(tolerance))
            throw std::invalid_argument("area: tolerance must be positive");
        AreaEstimate est;
        est.tolerance_used = tolerance;
        const auto& hv = outer_hull_.vertices();
        if (hv.size() < 3 || !(outer_box_.area() > 0.0)) return est;

        struct Node {
            double cx, cy;
            std::uint32_t a0, a1, s0, s1;
            bool no_free;  // no point of the cell lies in F
        };
        std::vector<std::uint32_t> arc_pool(fast_arcs_.size());
        std::iota(arc_pool.begin(), arc_pool.end(), 0u);
        std::vector<std::uint32_t> smp_pool(points_.size());
        std::iota(smp_pool.begin(), smp_pool.end(), 0u);
        double hw = 0.5 * outer_box_.width();
        double hh = 0.5 * outer_box_.height();
        std::vector<Node> nodes{{outer_box_.min_x + hw, outer_box_.min_y + hh, 0,
                                 static_cast<std::uint32_t>(arc_pool.size()), 0,
                                 static_cast<std::uint32_t>(smp_pool.size()), false}};
        std::vector<Node> pending;
        std::vector<std::uint32_t> arc_out, smp_out;
        CompensatedSum inside;

        for (int depth = 0;; ++depth) {
            const double rho = std::hypot(hw, hh);
            const double cell_area = 4.0 * hw * hh;
            const double keep = alpha_ + rho;
            const double keep2 = keep * keep;
            const bool try_polygon = rho >= 0.125 * alpha_;
            pending.clear();
            arc_out.clear();
            smp_out.clear();
            CompensatedSum undecided;

            for (const Node& nd : nodes) {
                ++est.cells_processed;
                bool no_free = nd.no_free;
                bool center_free = false;
                const auto s0 = static_cast<std::uint32_t>(smp_out.size());
                if (!no_free) {
                    double min_d2 = std::numeric_limits<double>::infinity();
                    for (std::uint32_t k = nd.s0; k < nd.s1; ++k) {
                        const std::uint32_t idx = smp_pool[k];
                        const double dx = points_[idx].x - nd.cx;
                        const double dy = points_[idx].y - nd.cy;
                        const double d2 = dx * dx + dy * dy;
                        min_d2 = std::min(min_d2, d2);
                        if (d2 < keep2) smp_out.push_back(idx);
                    }
                    const double min_d = std::sqrt(min_d2);
                    if (min_d >= keep) {  // whole cell is free space
                        smp_out.resize(s0);
                        continue;
                    }
                    if (min_d <= alpha_ - rho) {
                        no_free = true;
                        smp_out.resize(s0);
                    }
                    center_free = min_d >= alpha_;
                }
                const auto s1 = static_cast<std::uint32_t>(smp_out.size());
                const auto a0 = static_cast<std::uint32_t>(arc_out.size());
                double clr = center_free ? 0.0 : std::numeric_limits<double>::infinity();
                for (std::uint32_t k = nd.a0; k < nd.a1; ++k) {
                    const std::uint32_t idx = arc_pool[k];
                    const double d = fast_arcs_[idx].distance(nd.cx, nd.cy, alpha_);
                    if (d < clr) clr = d;
                    if (d < keep) arc_out.push_back(idx);
                }
                if (center_free) clr = 0.0;
                const bool decided_in = clr >= keep;
                const bool decided_out =
                    !decided_in && (clr + rho < alpha_ || (try_polygon && cell_outside_hull(nd.cx, nd.cy, hw, hh)));
                if (decided_in || decided_out) {
                    if (decided_in) inside += cell_area;
                    arc_out.resize(a0);
                    smp_out.resize(s0);
                    continue;
                }
                pending.push_back(
                    {nd.cx, nd.cy, a0, static_cast<std::uint32_t>(arc_out.size()), s0, s1, no_free});
                undecided += cell_area;
            }

            if (undecided.value() <= 2.0 * tolerance) {
                est.lower = inside.value();
                CompensatedSum up = inside;
                up += undecided.value();
                est.upper = up.value();
                break;
            }
            if (depth + 1 > kMaxDepth) throw std::runtime_error("area: tolerance unreachable at maximum depth");

            hw *= 0.5;
            hh *= 0.5;
            nodes.clear();
            nodes.reserve(4 * pending.size());
            for (const Node& p : pending) {
                for (int q = 0; q < 4; ++q) {
                    Node c = p;
                    c.cx += (q & 1) ? hw : -hw;
                    c.cy += (q & 2) ? hh : -hh;
                    nodes.push_back(c);
                }
            }
            arc_pool.swap(arc_out);
            smp_pool.swap(smp_out);
        }
        est.value = 0.5 * (est.lower + est.upper);
        est.value = std::clamp(est.value, est.lower, est.upper);
        return est;
    }

private:
    bool near_sample(const Point& x) const {
        bool found = false;
        const double a2 = alpha_ * alpha_;
        grid_.visit(x, alpha_, [&](std::uint32_t i) {
            if (distance_sq(points_[i], x) < a2) found = true;
            return !found;
        });
        return found;
    }

    bool cell_outside_hull(double cx, double cy, double hw, double hh) const {
        const auto& v = outer_hull_.vertices();
        const Point corners[4] = {{cx - hw, cy - hh}, {cx + hw, cy - hh}, {cx + hw, cy + hh}, {cx - hw, cy + hh}};
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Point& a = v[i];
            const Point& b = v[(i + 1) % v.size()];
            bool all_right = true;
            for (const auto& c : corners)
                if (orientation(a, b, c) >= 0) {
                    all_right = false;
                    break;
                }
            if (all_right) return true;
        }
        return false;
    }

    void build_free_boundary() {
        const double lim = 2.0 * alpha_ - 1e-9;
        const double lim2 = lim * lim;
        struct Neighbor {
            double dx, dy, d;
        };
        std::vector<Neighbor> nb;
        std::vector<AngularInterval> covered;
        auto gather = [&](std::size_t i, double lo, double hi) {
            const Point& p = points_[i];
            nb.clear();
            const double lo2 = lo * lo;
            const double hi2 = std::min(hi * hi, lim2);
            grid_.visit(p, hi, [&](std::uint32_t j) {
                if (j == i) return true;
                const double dx = points_[j].x - p.x;
                const double dy = points_[j].y - p.y;
                const double d2 = dx * dx + dy * dy;
                if (d2 >= lo2 && d2 < hi2) nb.push_back({dx, dy, std::sqrt(d2)});
                return true;
            });
        };
        auto add_cover = [&](auto b, auto e) {
            for (auto it = b; it != e; ++it) {
                const double half = std::acos(it->d / (2.0 * alpha_));
                covered.emplace_back(std::atan2(it->dy, it->dx) - half, 2.0 * half);
            }
            covered = merge_intervals(covered);
            return covered.size() == 1 && covered[0].is_full();
        };
        for (std::size_t i = 0; i < points_.size(); ++i) {
            const Point& p = points_[i];
            covered.clear();
            // nearer neighbors cover more of the circle, so try them first
            gather(i, 0.0, alpha_);
            auto s1 = std::partition(nb.begin(), nb.end(), [&](const Neighbor& n) { return n.d <= 0.25 * alpha_; });
            auto s2 = std::partition(s1, nb.end(), [&](const Neighbor& n) { return n.d <= 0.5 * alpha_; });
            bool full = (nb.begin() != s1 && add_cover(nb.begin(), s1)) || (s1 != s2 && add_cover(s1, s2)) ||
                        (s2 != nb.end() && add_cover(s2, nb.end()));
            if (!full) {
                gather(i, alpha_, 2.0 * alpha_);
                full = !nb.empty() && add_cover(nb.begin(), nb.end());
            }
            if (full) continue;
            for (const auto& gap : complement_intervals(covered)) {
                free_boundary_.emplace_back(p, alpha_, gap);
                arc_owner_.push_back(static_cast<std::uint32_t>(i));
            }
        }

        fast_arcs_.reserve(free_boundary_.size());
        for (const auto& a : free_boundary_) fast_arcs_.push_back(detail::make_free_arc(a));

        const BoundingBox sb = bounding_box(points_);
        const double pad = alpha_ * (1.0 + 1e-9);
        const BoundingBox box{sb.min_x - pad, sb.min_y - pad, sb.max_x + pad, sb.max_y + pad};
        const double narcs = static_cast<double>(std::max<std::size_t>(1, free_boundary_.size()));
        double cell = std::min(alpha_, std::sqrt(box.area() / (2.0 * narcs)));
        cell = std::max(cell, std::sqrt(box.area() / 4.0e6));
        arc_grid_ = detail::ArcGrid(free_boundary_, box, cell);
    }

    double alpha_ = 1.0;
    std::vector<Point> points_;
    GridIndex grid_;
    ConvexPolygon outer_hull_;
    BoundingBox outer_box_;
    std::vector<Arc> free_boundary_;
    std::vector<std::uint32_t> arc_owner_;
    std::vector<detail::FreeArc> fast_arcs_;
    detail::ArcGrid arc_grid_;
};

}  // namespace alphavol
