#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace alphavol {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angular slack used when comparing interval endpoints.
inline constexpr double kAngularTolerance = 1e-9;

/// Planar point. Both coordinates are finite; construction rejects NaN and infinities.
struct Point {
    double x = 0.0;
    double y = 0.0;

    constexpr Point() = default;
    Point(double x_, double y_) : x(x_), y(y_) {
        if (!std::isfinite(x_) || !std::isfinite(y_))
            throw std::invalid_argument("Point: non-finite coordinate");
    }

    friend bool operator==(const Point&, const Point&) = default;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator-(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline double distance_sq(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

/// Reduces an angle to [0, 2π).
inline double normalize_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

/// Counterclockwise interval on a circle, [start, start + extent].
/// The full circle is represented with extent exactly 2π.
class AngularInterval {
public:
    AngularInterval() = default;
    AngularInterval(double start, double extent) {
        if (!std::isfinite(start) || !std::isfinite(extent))
            throw std::invalid_argument("AngularInterval: non-finite value");
        if (extent < 0.0 || extent > kTwoPi)
            throw std::invalid_argument("AngularInterval: extent outside [0, 2pi]");
        start_ = normalize_angle(start);
        extent_ = extent;
    }

    static AngularInterval full() { return AngularInterval(0.0, kTwoPi); }

    double start() const { return start_; }
    double extent() const { return extent_; }
    /// End angle, not reduced (may exceed 2π for wrapping intervals).
    double end() const { return start_ + extent_; }
    bool is_full() const { return extent_ >= kTwoPi; }

    /// True when `angle` lies in the interval, widened by `tol` on both ends.
    bool contains(double angle, double tol = 0.0) const {
        if (is_full()) return true;
        const double off = normalize_angle(angle - start_);
        return off <= extent_ + tol || off >= kTwoPi - tol;
    }

    friend bool operator==(const AngularInterval&, const AngularInterval&) = default;

private:
    double start_ = 0.0;
    double extent_ = 0.0;
};

/// Circular arc: the points center + radius·(cos t, sin t) for t in `interval`.
struct Arc {
    Point center;
    double radius = 1.0;
    AngularInterval interval;

    Arc() = default;
    Arc(Point c, double r, AngularInterval iv) : center(c), radius(r), interval(iv) {
        if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("Arc: radius must be positive");
    }

    Point point_at(double angle) const {
        return {center.x + radius * std::cos(angle), center.y + radius * std::sin(angle)};
    }
    Point start_point() const { return point_at(interval.start()); }
    Point end_point() const { return point_at(interval.end()); }
};

/// Raised when two circles share a center; callers are expected to dedupe first.
class DuplicateCenterError : public std::domain_error {
public:
    DuplicateCenterError() : std::domain_error("duplicate center") {}
};

/// The open arc of the circle (c1, radius) lying strictly inside the open disk (c2, radius).
/// Empty when the centers are at least 2·radius apart (near-tangent pairs count as disjoint).
inline std::optional<AngularInterval> circle_circle_covered_interval(Point c1, Point c2, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("circle_circle_covered_interval: radius must be positive");
    const Vec2 v = c2 - c1;
    const double d = norm(v);
    if (d < 1e-12) throw DuplicateCenterError();
    if (d >= 2.0 * radius - 1e-9) return std::nullopt;
    const double half = std::acos(d / (2.0 * radius));
    const double dir = std::atan2(v.y, v.x);
    return AngularInterval(dir - half, 2.0 * half);
}

/// Disjoint union of the input intervals, sorted by start angle. An interval
/// wrapping through angle 0 is reported last. Endpoints closer than `tol` are joined.
inline std::vector<AngularInterval> merge_intervals(const std::vector<AngularInterval>& intervals,
                                                    double tol = kAngularTolerance) {
    struct Span {
        double lo, hi;
    };
    std::vector<Span> spans;
    spans.reserve(intervals.size() + 1);
    for (const auto& iv : intervals) {
        if (iv.is_full()) return {AngularInterval::full()};
        const double lo = iv.start();
        const double hi = iv.end();
        if (hi > kTwoPi) {
            spans.push_back({lo, kTwoPi});
            spans.push_back({0.0, hi - kTwoPi});
        } else {
            spans.push_back({lo, hi});
        }
    }
    if (spans.empty()) return {};
    std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.lo < b.lo; });

    std::vector<Span> merged;
    merged.push_back(spans.front());
    for (std::size_t i = 1; i < spans.size(); ++i) {
        if (spans[i].lo <= merged.back().hi + tol)
            merged.back().hi = std::max(merged.back().hi, spans[i].hi);
        else
            merged.push_back(spans[i]);
    }
    if (merged.size() == 1 && merged[0].lo <= tol && merged[0].hi >= kTwoPi - tol)
        return {AngularInterval::full()};

    // join across the 0 / 2π seam
    bool wrap = merged.size() > 1 && merged.front().lo <= tol && merged.back().hi >= kTwoPi - tol;
    std::vector<AngularInterval> out;
    const std::size_t first = wrap ? 1 : 0;
    const std::size_t last = wrap ? merged.size() - 1 : merged.size();
    for (std::size_t i = first; i < last; ++i)
        out.emplace_back(merged[i].lo, std::min(merged[i].hi - merged[i].lo, kTwoPi));
    if (wrap) {
        const double ext = (kTwoPi - merged.back().lo) + merged.front().hi;
        out.emplace_back(merged.back().lo, std::min(ext, kTwoPi));
    }
    return out;
}

/// Complement of a union of intervals. Gaps narrower than `tol` are dropped.
inline std::vector<AngularInterval> complement_intervals(const std::vector<AngularInterval>& intervals,
                                                         double tol = kAngularTolerance) {
    const auto merged = merge_intervals(intervals, tol);
    if (merged.empty()) return {AngularInterval::full()};
    if (merged.size() == 1 && merged[0].is_full()) return {};
    std::vector<AngularInterval> gaps;
    const std::size_t k = merged.size();
    for (std::size_t i = 0; i < k; ++i) {
        const double gap_start = merged[i].end();
        double gap_end = merged[(i + 1) % k].start();
        while (gap_end < gap_start) gap_end += kTwoPi;
        const double ext = gap_end - gap_start;
        if (ext > tol) gaps.emplace_back(gap_start, std::min(ext, kTwoPi));
    }
    std::sort(gaps.begin(), gaps.end(),
              [](const AngularInterval& a, const AngularInterval& b) { return a.start() < b.start(); });
    return gaps;
}

/// Area between a chord of length `chord` and the minor arc of a circle of radius `radius`.
inline double circular_segment_area(double radius, double chord) {
    if (!(radius > 0.0)) throw std::invalid_argument("circular_segment_area: radius must be positive");
    if (chord < 0.0 || chord > 2.0 * radius * (1.0 + 1e-15))
        throw std::invalid_argument("circular_segment_area: chord outside [0, 2R]");
    const double phi = 2.0 * std::asin(std::min(1.0, chord / (2.0 * radius)));
    // phi - sin(phi) loses precision for small phi; use the series there.
    double core;
    if (phi < 1e-3) {
        const double p3 = phi * phi * phi;
        core = p3 / 6.0 - p3 * phi * phi / 120.0 + p3 * p3 * phi / 5040.0;
    } else {
        core = phi - std::sin(phi);
    }
    return 0.5 * radius * radius * core;
}

}  // namespace alphavol
