#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "alphavol/convex_hull.hpp"
#include "alphavol/geom.hpp"

namespace alphavol {

/// Uniform bucket grid over a point set. Buckets are stored densely (CSR layout)
/// over the occupied bounding box.
class GridIndex {
public:
    /// Upper bound on the number of buckets; the cell size grows if needed.
    static constexpr std::size_t kMaxCells = std::size_t{1} << 22;

    GridIndex() = default;

    GridIndex(std::span<const Point> points, double cell_size) {
        if (!(cell_size > 0.0) || !std::isfinite(cell_size))
            throw std::invalid_argument("GridIndex: cell size must be positive");
        if (points.empty()) throw std::invalid_argument("GridIndex: empty input");
        const BoundingBox box = bounding_box(points);
        origin_ = Point(box.min_x, box.min_y);
        cell_ = cell_size;
        auto dims = [&](double c) {
            return std::pair<double, double>{std::floor(box.width() / c) + 1.0, std::floor(box.height() / c) + 1.0};
        };
        auto [w, h] = dims(cell_);
        while (w * h > static_cast<double>(kMaxCells)) {
            cell_ *= 2.0;
            std::tie(w, h) = dims(cell_);
        }
        nx_ = static_cast<std::int64_t>(w);
        ny_ = static_cast<std::int64_t>(h);

        std::vector<std::uint32_t> counts(static_cast<std::size_t>(nx_ * ny_) + 1, 0);
        std::vector<std::uint32_t> cell_of(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto [cx, cy] = cell_coords(points[i]);
            cell_of[i] = static_cast<std::uint32_t>(cy * nx_ + cx);
            ++counts[cell_of[i] + 1];
        }
        for (std::size_t c = 1; c < counts.size(); ++c) counts[c] += counts[c - 1];
        offsets_ = counts;
        items_.resize(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) items_[counts[cell_of[i]]++] = static_cast<std::uint32_t>(i);
    }

    double cell_size() const { return cell_; }
    Point origin() const { return origin_; }
    std::int64_t columns() const { return nx_; }
    std::int64_t rows() const { return ny_; }

    /// Integer cell coordinates of p, clamped to the grid.
    std::pair<std::int64_t, std::int64_t> cell_coords(const Point& p) const {
        return {to_cell((p.x - origin_.x) / cell_, nx_), to_cell((p.y - origin_.y) / cell_, ny_)};
    }

    std::span<const std::uint32_t> bucket(std::int64_t cx, std::int64_t cy) const {
        const auto c = static_cast<std::size_t>(cy * nx_ + cx);
        return {items_.data() + offsets_[c], items_.data() + offsets_[c + 1]};
    }

    /// Calls fn(index) for every indexed point in the buckets overlapping the
    /// square of half-side `radius` around `center`: a superset of the points
    /// within `radius`. Stops early when fn returns false.
    template <class Fn>
    void visit(const Point& center, double radius, Fn&& fn) const {
        if (center.x + radius < origin_.x || center.y + radius < origin_.y) return;
        if (center.x - radius > origin_.x + static_cast<double>(nx_) * cell_) return;
        if (center.y - radius > origin_.y + static_cast<double>(ny_) * cell_) return;
        const std::int64_t x0 = to_cell((center.x - radius - origin_.x) / cell_, nx_);
        const std::int64_t x1 = to_cell((center.x + radius - origin_.x) / cell_, nx_);
        const std::int64_t y0 = to_cell((center.y - radius - origin_.y) / cell_, ny_);
        const std::int64_t y1 = to_cell((center.y + radius - origin_.y) / cell_, ny_);
        for (std::int64_t cy = y0; cy <= y1; ++cy)
            for (std::int64_t cx = x0; cx <= x1; ++cx)
                for (std::uint32_t idx : bucket(cx, cy))
                    if (!fn(idx)) return;
    }

    std::vector<std::uint32_t> query(const Point& center, double radius) const {
        std::vector<std::uint32_t> out;
        visit(center, radius, [&](std::uint32_t i) {
            out.push_back(i);
            return true;
        });
        return out;
    }

private:
    static std::int64_t to_cell(double scaled, std::int64_t n) {
        const double f = std::floor(scaled);
        if (!(f > 0.0)) return 0;
        if (f >= static_cast<double>(n - 1)) return n - 1;
        return static_cast<std::int64_t>(f);
    }

    Point origin_;
    double cell_ = 1.0;
    std::int64_t nx_ = 0;
    std::int64_t ny_ = 0;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> items_;
};

}  // namespace alphavol
