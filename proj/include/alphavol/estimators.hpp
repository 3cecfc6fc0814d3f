#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "alphavol/alpha_hull.hpp"
#include "alphavol/geom.hpp"
#include "alphavol/numeric.hpp"
#include "alphavol/rng.hpp"

namespace alphavol {

struct SplitResult {
    double v_hat = 0.0;
    double mu_hat_s = 0.0;  ///< certified-area midpoint of the first-subsample hull
    double mu_lower = 0.0;
    double mu_upper = 0.0;
    double p_hat = 0.0;
    std::size_t outside = 0;  ///< second-subsample points outside the hull
    std::size_t m = 0;
    std::size_t n = 0;
    double alpha = 0.0;
    bool clamped = false;  ///< the 1/2 floor on the denominator was used

    std::size_t trials() const { return n - m; }
};

struct VolumeInterval {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.0;

    double length() const { return upper - lower; }
    bool contains(double v) const { return v >= lower && v <= upper; }
};

/// mu / max(1 - p, 1/2).
inline double corrected_volume(double mu, double p) { return mu / std::max(1.0 - p, 0.5); }

inline AreaEstimate plug_in(std::span<const Point> sample, double alpha, const Tolerance& tol) {
    return AlphaHull::build(sample, alpha).area(tol);
}

inline AreaEstimate plug_in(std::span<const Point> sample, double alpha) {
    return plug_in(sample, alpha, Tolerance::relative(AlphaHull::kDefaultRelativeTolerance));
}

/// Estimator from a split the caller already made: the hull is built on
/// `first`, the proportion outside it is measured on `second`.
inline SplitResult split_estimate_presplit(std::span<const Point> first, std::span<const Point> second, double alpha,
                                           const Tolerance& tol) {
    if (first.empty() || second.empty()) throw std::invalid_argument("split_estimate: empty subsample");
    const AlphaHull hull = AlphaHull::build(first, alpha);
    const AreaEstimate a = hull.area(tol);
    SplitResult r;
    r.m = first.size();
    r.n = first.size() + second.size();
    r.alpha = alpha;
    r.mu_hat_s = a.value;
    r.mu_lower = a.lower;
    r.mu_upper = a.upper;
    for (const auto& x : second)
        if (!hull.contains(x)) ++r.outside;
    r.p_hat = static_cast<double>(r.outside) / static_cast<double>(second.size());
    r.clamped = r.p_hat > 0.5;
    r.v_hat = corrected_volume(r.mu_hat_s, r.p_hat);
    return r;
}

/// Sample-splitting estimator: a random permutation drawn from rng puts m
/// points in the hull-building subsample and the rest in the test subsample.
inline SplitResult split_estimate(std::span<const Point> sample, double alpha, std::size_t m, const Tolerance& tol,
                                  Rng& rng) {
    const std::size_t n = sample.size();
    if (n < 2) throw std::invalid_argument("split_estimate: need at least 2 points");
    if (m < 1 || m > n - 1) throw std::invalid_argument("split_estimate: m must lie in [1, n-1]");
    std::vector<Point> perm(sample.begin(), sample.end());
    std::shuffle(perm.begin(), perm.end(), rng);
    const std::span<const Point> all(perm);
    return split_estimate_presplit(all.first(m), all.subspan(m), alpha, tol);
}

/// Mean of b split estimates over fresh random splits of the same sample.
/// `parts`, when given, receives the individual estimates.
inline double bagged_estimate(std::span<const Point> sample, double alpha, std::size_t m, std::size_t b,
                              const Tolerance& tol, Rng& rng, std::vector<double>* parts = nullptr) {
    if (b < 1) throw std::invalid_argument("bagged_estimate: b must be >= 1");
    CompensatedSum sum;
    if (parts) parts->clear();
    for (std::size_t i = 0; i < b; ++i) {
        const double v = split_estimate(sample, alpha, m, tol, rng).v_hat;
        sum += v;
        if (parts) parts->push_back(v);
    }
    return sum.value() / static_cast<double>(b);
}

inline double normal_quantile_two_sided(double level) {
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must lie in (0, 1)");
    return boost::math::quantile(boost::math::normal(), 0.5 + 0.5 * level);
}

/// Wilson score interval for k successes in `trials`, clipped to [0, 1].
inline std::pair<double, double> wilson_interval(std::size_t k, std::size_t trials, double level) {
    if (trials == 0) throw std::invalid_argument("wilson_interval: trials must be >= 1");
    if (k > trials) throw std::invalid_argument("wilson_interval: k exceeds trials");
    const double z = normal_quantile_two_sided(level);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(k) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = (z / denom) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    double lo = std::clamp(center - half, 0.0, 1.0);
    double hi = std::clamp(center + half, 0.0, 1.0);
    if (k == 0) lo = 0.0;
    if (k == trials) hi = 1.0;
    return {lo, hi};
}

/// Confidence interval for the volume: the Wilson interval for the outside
/// proportion pushed through p -> mu / max(1 - p, 1/2), conditional on the hull.
inline VolumeInterval volume_ci(const SplitResult& s, double level) {
    const auto [lo, hi] = wilson_interval(s.outside, s.trials(), level);
    return {corrected_volume(s.mu_hat_s, lo), corrected_volume(s.mu_hat_s, hi), level};
}

}  // namespace alphavol
