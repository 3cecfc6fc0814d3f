#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/math/distributions/binomial.hpp>

#include "alphavol/numeric.hpp"

namespace alphavol::harness {

inline double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean of empty range");
    CompensatedSum s;
    for (double x : v) s += x;
    return s.value() / static_cast<double>(v.size());
}

/// Sample standard deviation (n - 1 denominator); 0 for a single value.
inline double sample_sd(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    CompensatedSum s;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s.value() / static_cast<double>(v.size() - 1));
}

inline double rms(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("rms of empty range");
    CompensatedSum s;
    for (double x : v) s += x * x;
    return std::sqrt(s.value() / static_cast<double>(v.size()));
}

/// One-sided sign test: P(Bin(trials, 1/2) >= wins).
inline double sign_test_p(std::size_t wins, std::size_t trials) {
    if (wins > trials) throw std::invalid_argument("sign_test_p: wins exceed trials");
    if (trials == 0 || wins == 0) return 1.0;
    const boost::math::binomial_distribution<double> bin(static_cast<double>(trials), 0.5);
    return boost::math::cdf(boost::math::complement(bin, static_cast<double>(wins - 1)));
}

/// Sign test that a[i] < b[i] more often than not; ties are dropped.
inline double paired_sign_test_less(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("paired_sign_test_less: size mismatch");
    std::size_t wins = 0, trials = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) continue;
        ++trials;
        if (a[i] < b[i]) ++wins;
    }
    return sign_test_p(wins, trials);
}

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Least squares of log(error) on log(n).
inline RateFit fit_rate(std::span<const std::pair<double, double>> points) {
    std::vector<double> xs, ys;
    for (const auto& [n, e] : points) {
        if (!(n > 0.0)) throw std::invalid_argument("fit_rate: n must be positive");
        if (!(e > 0.0) || !std::isfinite(e)) throw std::invalid_argument("fit_rate: errors must be positive");
        xs.push_back(std::log(n));
        ys.push_back(std::log(e));
    }
    std::vector<double> distinct = xs;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 distinct n");

    const double mx = mean(xs), my = mean(ys);
    CompensatedSum sxx, sxy, syy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    RateFit f;
    f.slope = sxy.value() / sxx.value();
    f.intercept = my - f.slope * mx;
    const double ss_res = syy.value() - f.slope * sxy.value();
    f.r_squared = syy.value() > 0.0 ? std::clamp(1.0 - ss_res / syy.value(), 0.0, 1.0) : 1.0;
    return f;
}

}  // namespace alphavol::harness
