#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "alphavol/geom.hpp"

namespace alphavol {

namespace detail {

inline void two_sum(double a, double b, double& s, double& err) {
    s = a + b;
    const double bv = s - a;
    const double av = s - bv;
    err = (a - av) + (b - bv);
}

inline void two_product(double a, double b, double& p, double& err) {
    p = a * b;
    err = std::fma(a, b, -p);
}

// Sign of an exact sum of doubles. Builds a nonoverlapping expansion with
// grow-expansion steps; its largest nonzero component carries the sign.
template <std::size_t N>
int exact_sum_sign(const std::array<double, N>& terms) {
    std::array<double, N> expansion{};
    std::size_t len = 0;
    for (double t : terms) {
        double q = t;
        for (std::size_t i = 0; i < len; ++i) {
            double s, e;
            two_sum(q, expansion[i], s, e);
            expansion[i] = e;
            q = s;
        }
        expansion[len++] = q;
    }
    for (std::size_t i = len; i-- > 0;) {
        if (expansion[i] > 0.0) return 1;
        if (expansion[i] < 0.0) return -1;
    }
    return 0;
}

}  // namespace detail

/// Exact orientation sign without the filter.
inline int orientation_exact(const Point& a, const Point& b, const Point& c) {
    // det = ax*by - ax*cy - cx*by - ay*bx + ay*cx + cy*bx
    std::array<double, 12> t{};
    detail::two_product(a.x, b.y, t[0], t[1]);
    detail::two_product(-a.x, c.y, t[2], t[3]);
    detail::two_product(-c.x, b.y, t[4], t[5]);
    detail::two_product(-a.y, b.x, t[6], t[7]);
    detail::two_product(a.y, c.x, t[8], t[9]);
    detail::two_product(c.y, b.x, t[10], t[11]);
    return detail::exact_sum_sign(t);
}

/// Exact sign of the orientation determinant of (a, b, c): +1 for a left turn,
/// -1 for a right turn, 0 for collinear. A floating-point filter decides most
/// inputs; the rest are re-evaluated exactly.
inline int orientation(const Point& a, const Point& b, const Point& c) {
    const double left = (a.x - c.x) * (b.y - c.y);
    const double right = (a.y - c.y) * (b.x - c.x);
    const double det = left - right;
    constexpr double kErrBound = 3.3306690738754716e-16;  // (3 + 16u)u
    const double bound = kErrBound * (std::fabs(left) + std::fabs(right));
    if (det > bound) return 1;
    if (-det > bound) return -1;
    return orientation_exact(a, b, c);
}

}  // namespace alphavol
