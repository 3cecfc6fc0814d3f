#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "alphavol/convex_hull.hpp"
#include "alphavol/geom.hpp"
#include "alphavol/rng.hpp"

namespace alphavol {

/// A bounded planar region with exact area and membership, plus a sampler.
class Domain {
public:
    virtual ~Domain() = default;

    virtual std::string name() const = 0;
    /// Lebesgue measure of the support.
    virtual double area() const = 0;
    virtual BoundingBox bbox() const = 0;
    virtual bool contains(const Point& x) const = 0;
    /// Rolling radius claimed for both the set and its complement, if any.
    virtual std::optional<double> r_inner() const { return std::nullopt; }

    /// Whether draw() samples the uniform law on the support.
    virtual bool is_uniform() const { return true; }
    virtual bool has_direct_sampler() const { return false; }
    /// One draw from the domain's native law; only valid with a direct sampler.
    virtual Point draw(Rng&) const { throw std::logic_error(name() + ": no direct sampler"); }
};

using DomainPtr = std::shared_ptr<const Domain>;

namespace detail {

inline void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

inline Point uniform_in_disk(Rng& rng, double radius) {
    const double rho = radius * std::sqrt(uniform01(rng));
    const double t = kTwoPi * uniform01(rng);
    return {rho * std::cos(t), rho * std::sin(t)};
}

inline Point uniform_in_annulus(Rng& rng, double r_in, double r_out) {
    const double rho = std::sqrt(uniform01(rng) * (r_out * r_out - r_in * r_in) + r_in * r_in);
    const double t = kTwoPi * uniform01(rng);
    return {rho * std::cos(t), rho * std::sin(t)};
}

}  // namespace detail

class Annulus : public Domain {
public:
    Annulus(double r_in, double r_out) : r_in_(r_in), r_out_(r_out) {
        detail::require(r_in > 0.0 && r_out > r_in && std::isfinite(r_out), "annulus: need 0 < r_in < r_out");
    }

    double r_in() const { return r_in_; }
    double r_out() const { return r_out_; }

    std::string name() const override { return "annulus"; }
    double area() const override { return std::numbers::pi * (r_out_ * r_out_ - r_in_ * r_in_); }
    BoundingBox bbox() const override { return {-r_out_, -r_out_, r_out_, r_out_}; }
    bool contains(const Point& x) const override {
        const double q = x.x * x.x + x.y * x.y;
        return q >= r_in_ * r_in_ && q <= r_out_ * r_out_;
    }
    // the hole limits the complement, the ring width limits the set
    std::optional<double> r_inner() const override { return std::min(r_in_, 0.5 * (r_out_ - r_in_)); }
    bool has_direct_sampler() const override { return true; }
    Point draw(Rng& rng) const override { return detail::uniform_in_annulus(rng, r_in_, r_out_); }

private:
    double r_in_, r_out_;
};

class Ellipse : public Domain {
public:
    Ellipse(double a, double b) : a_(a), b_(b) {
        detail::require(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b), "ellipse: need a, b > 0");
    }

    double a() const { return a_; }
    double b() const { return b_; }

    std::string name() const override { return "ellipse"; }
    double area() const override { return std::numbers::pi * a_ * b_; }
    BoundingBox bbox() const override { return {-a_, -b_, a_, b_}; }
    bool contains(const Point& x) const override {
        const double u = x.x / a_, v = x.y / b_;
        return u * u + v * v <= 1.0;
    }
    // smallest radius of curvature; the complement of a convex set rolls freely
    std::optional<double> r_inner() const override {
        return std::min(a_, b_) * std::min(a_, b_) / std::max(a_, b_);
    }
    bool has_direct_sampler() const override { return true; }
    Point draw(Rng& rng) const override {
        const Point p = detail::uniform_in_disk(rng, 1.0);
        return {a_ * p.x, b_ * p.y};
    }

private:
    double a_, b_;
};

class Ball : public Domain {
public:
    explicit Ball(double radius) : radius_(radius) {
        detail::require(radius > 0.0 && std::isfinite(radius), "ball: need radius > 0");
    }

    double radius() const { return radius_; }

    std::string name() const override { return "ball"; }
    double area() const override { return std::numbers::pi * radius_ * radius_; }
    BoundingBox bbox() const override { return {-radius_, -radius_, radius_, radius_}; }
    bool contains(const Point& x) const override { return x.x * x.x + x.y * x.y <= radius_ * radius_; }
    std::optional<double> r_inner() const override { return radius_; }
    bool has_direct_sampler() const override { return true; }
    Point draw(Rng& rng) const override { return detail::uniform_in_disk(rng, radius_); }

private:
    double radius_;
};

/// Area of the cap {x in unit d-ball : x_1 >= 1 - t}, by adaptive quadrature of
/// pi^((d-1)/2) / Gamma((d+1)/2) * int_0^acos(1-t) sin^d.
inline double cap_area(int d, double t) {
    if (d < 1) throw std::invalid_argument("cap_area: dimension must be >= 1");
    if (!(t >= 0.0 && t <= 2.0)) throw std::invalid_argument("cap_area: height must lie in [0, 2]");
    if (t == 0.0) return 0.0;
    const double top = std::acos(1.0 - t);
    double err = 0.0;
    const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [d](double x) { return std::pow(std::sin(x), d); }, 0.0, top, 15, 1e-12, &err);
    const double k = std::pow(std::numbers::pi, 0.5 * (d - 1)) / boost::math::tgamma(0.5 * (d + 1));
    return k * integral;
}

/// A disk B0 = B(0, r0) with smooth dents of depth h carved at equally spaced
/// directions. Dent j keeps the points within distance r of
/// E_j = B(0, r0 - r) & {<x, u_j> <= r0 - h - r}, i.e. the ball rolled inside
/// B0 with the cap beyond depth h removed.
class DentWorld : public Domain {
public:
    DentWorld(double r0, double r, double eps, std::vector<bool> omega) : r0_(r0), r_(r), eps_(eps) {
        detail::require(r0 > 0.0 && std::isfinite(r0), "dent_world: need r0 > 0");
        detail::require(r >= 0.0 && 2.0 * r < r0, "dent_world: need 0 <= r and r0 > 2r");
        detail::require(eps > 0.0 && eps < std::numbers::sqrt2 * r0, "dent_world: need 0 < eps < sqrt(2) r0");
        theta_ = std::acos(1.0 - eps * eps / (2.0 * r0 * r0));
        h_ = (r0 - r) * eps * eps / (2.0 * r0 * r0);
        c_ = r0 - h_ - r;
        sc_ = std::sqrt(h_ * (2.0 * (r0 - r) - h_));  // sqrt(R^2 - c^2) with R - c = h

        const std::size_t m = max_dents(r0, eps);
        detail::require(omega.size() <= m, "dent_world: more dents than the packing allows");
        omega.resize(m, false);
        omega_ = std::move(omega);
        for (std::size_t j = 0; j < m; ++j) {
            const double a = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
            directions_.push_back({std::cos(a), std::sin(a)});
        }
        eta_ = eta();
    }

    /// First `dents` directions active.
    static DentWorld with_dents(double r0, double r, double eps, std::size_t dents) {
        return DentWorld(r0, r, eps, std::vector<bool>(dents, true));
    }

    /// Largest m with 2 r0 sin(pi/m) > 2 eps, so equally spaced unit directions
    /// scaled by r0 are more than 2 eps apart.
    static std::size_t max_dents(double r0, double eps) {
        std::size_t m = 1;
        while (2.0 * r0 * std::sin(std::numbers::pi / static_cast<double>(m + 1)) > 2.0 * eps) ++m;
        return m;
    }

    double r0() const { return r0_; }
    double r() const { return r_; }
    double eps() const { return eps_; }
    double theta() const { return theta_; }
    double h() const { return h_; }
    const std::vector<Vec2>& dent_directions() const { return directions_; }
    const std::vector<bool>& omega() const { return omega_; }
    std::size_t active_dents() const { return static_cast<std::size_t>(std::count(omega_.begin(), omega_.end(), true)); }

    /// Distance from x to the eroded body E for the dent along unit vector u.
    double distance_to_core(const Point& x, Vec2 u) const {
        const double t = x.x * u.x + x.y * u.y;
        const double s = -x.x * u.y + x.y * u.x;
        const double big_r = r0_ - r_;
        const double rho = std::hypot(t, s);
        if (rho <= big_r && t <= c_) return 0.0;
        double best = std::hypot(t - c_, std::fabs(s) - sc_);  // nearest corner
        if (rho > big_r && t * big_r <= c_ * rho) best = std::min(best, rho - big_r);
        if (t > c_ && std::fabs(s) <= sc_) best = std::min(best, t - c_);
        return best;
    }

    std::string name() const override { return "dent_world"; }
    double area() const override { return std::numbers::pi * r0_ * r0_ - static_cast<double>(active_dents()) * eta_; }
    BoundingBox bbox() const override { return {-r0_, -r0_, r0_, r0_}; }
    bool contains(const Point& x) const override {
        if (x.x * x.x + x.y * x.y > r0_ * r0_) return false;
        for (std::size_t j = 0; j < omega_.size(); ++j)
            if (omega_[j] && distance_to_core(x, directions_[j]) > r_) return false;
        return true;
    }
    std::optional<double> r_inner() const override { return r_; }

    /// Area removed by one dent, mu(B0) - mu(Q_j), by integrating slice widths
    /// across the dent axis. Slices are indexed by the depth s below the top
    /// of B0 so that nothing near the rim is computed as a difference of
    /// squares.
    double eta(double rel_tol = 1e-10) const {
        const double big_r = r0_ - r_;
        const double s_end = r0_ * h_ / big_r;  // deeper than this Q_j spans all of B0
        auto disk_half = [this](double d) { return std::sqrt(std::max(0.0, d * (2.0 * r0_ - d))); };
        auto dent_half = [this](double d) { return sc_ + std::sqrt(std::max(0.0, (d - h_) * (2.0 * r_ + h_ - d))); };
        auto removed = [&](double d) {
            if (d <= h_) return 2.0 * disk_half(d);
            return 2.0 * std::max(0.0, disk_half(d) - dent_half(d));
        };
        // split where the removed width switches off, so every piece is smooth
        // inside and at worst has square-root behaviour at its ends
        std::vector<double> knots{0.0, h_};
        if (s_end > h_) {
            auto gap = [&](double d) { return disk_half(d) - dent_half(d); };
            const int probes = 4096;
            double prev_d = h_, prev_g = gap(h_);
            for (int k = 1; k <= probes; ++k) {
                const double d = h_ + (s_end - h_) * k / probes;
                const double g = gap(d);
                if ((g > 0.0) != (prev_g > 0.0)) {
                    std::uintmax_t iters = 200;
                    const auto root = boost::math::tools::toms748_solve(
                        gap, prev_d, d, prev_g, g, boost::math::tools::eps_tolerance<double>(52), iters);
                    knots.push_back(0.5 * (root.first + root.second));
                }
                prev_d = d;
                prev_g = g;
            }
            knots.push_back(s_end);
        }
        // two independent rules per piece; their agreement is the error check
        using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
        boost::math::quadrature::tanh_sinh<double> ts;
        double total = 0.0, check = 0.0;
        for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
            const double lo = knots[k], hi = knots[k + 1];
            if (!(hi > lo)) continue;
            const double g = GK::integrate(removed, lo, hi, 12, rel_tol);
            check += g;
            // tanh-sinh cannot place nodes inside pieces this short
            total += hi - lo < 1e-9 * std::max(hi, h_) ? g : ts.integrate(removed, lo, hi, rel_tol);
        }
        if (std::fabs(total - check) > 1e-7 * total)
            throw std::runtime_error("eta: quadrature failed to converge");
        return total;
    }

    /// Cap of B0 beyond the chord at depth h: contained in every dent region.
    double cap_at_depth_h() const { return r0_ * r0_ * cap_area(2, h_ / r0_); }
    /// Cap of B0 beyond the chord at depth eps^2 / (2 r0): contains every dent region.
    double cap_at_aperture() const { return r0_ * r0_ * cap_area(2, eps_ * eps_ / (2.0 * r0_ * r0_)); }

private:
    double r0_, r_, eps_;
    double theta_ = 0.0, h_ = 0.0, c_ = 0.0, sc_ = 0.0, eta_ = 0.0;
    std::vector<Vec2> directions_;
    std::vector<bool> omega_;
};

/// Unit disk with density proportional to a on |x| <= 1/2 and b on 1/2 < |x| <= 1.
class NonuniformDisk : public Domain {
public:
    NonuniformDisk(double a, double b) : a_(a), b_(b) {
        detail::require(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b), "nonuniform_disk: need a, b > 0");
    }

    double a() const { return a_; }
    double b() const { return b_; }
    /// Probability of the inner disk |x| <= 1/2.
    double inner_mass() const { return (a_ / 4.0) / (a_ / 4.0 + 3.0 * b_ / 4.0); }
    /// Ratio of the outer-ring density to the uniform density.
    double bias_constant() const { return b_ / (a_ / 4.0 + 3.0 * b_ / 4.0); }

    std::string name() const override { return "nonuniform_disk"; }
    double area() const override { return std::numbers::pi; }
    BoundingBox bbox() const override { return {-1.0, -1.0, 1.0, 1.0}; }
    bool contains(const Point& x) const override { return x.x * x.x + x.y * x.y <= 1.0; }
    std::optional<double> r_inner() const override { return 1.0; }
    bool is_uniform() const override { return a_ == b_; }
    bool has_direct_sampler() const override { return true; }
    Point draw(Rng& rng) const override {
        if (uniform01(rng) < inner_mass()) return detail::uniform_in_disk(rng, 0.5);
        return detail::uniform_in_annulus(rng, 0.5, 1.0);
    }

private:
    double a_, b_;
};

/// Minimum acceptance rate tolerated by rejection sampling.
inline constexpr double kMinAcceptance = 1e-4;

/// n uniform points on the domain's support: the direct sampler when it is
/// uniform, otherwise rejection from the bounding box.
inline std::vector<Point> sample_uniform(const Domain& domain, std::size_t n, Rng& rng) {
    std::vector<Point> out;
    out.reserve(n);
    if (domain.has_direct_sampler() && domain.is_uniform()) {
        for (std::size_t i = 0; i < n; ++i) out.push_back(domain.draw(rng));
        return out;
    }
    const BoundingBox box = domain.bbox();
    std::uint64_t tries = 0;
    while (out.size() < n) {
        const Point p(box.min_x + box.width() * uniform01(rng), box.min_y + box.height() * uniform01(rng));
        ++tries;
        if (domain.contains(p)) out.push_back(p);
        if (tries >= 100000 && static_cast<double>(out.size()) < kMinAcceptance * static_cast<double>(tries))
            throw std::runtime_error("sample_uniform: acceptance rate below 1e-4");
    }
    return out;
}

/// n IID points from the domain's own law (non-uniform for NonuniformDisk).
inline std::vector<Point> sample(const Domain& domain, std::size_t n, Rng& rng) {
    if (!domain.has_direct_sampler()) return sample_uniform(domain, n, rng);
    std::vector<Point> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(domain.draw(rng));
    return out;
}

/// Homogeneous Poisson process of intensity lambda on the domain.
inline std::vector<Point> sample_poisson(const Domain& domain, double lambda, Rng& rng) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("sample_poisson: lambda must be positive");
    std::poisson_distribution<std::uint64_t> count(lambda * domain.area());
    return sample_uniform(domain, static_cast<std::size_t>(count(rng)), rng);
}

}  // namespace alphavol
