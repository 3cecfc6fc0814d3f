#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "alphavol/convex_hull.hpp"
#include "alphavol/domain_spec.hpp"
#include "alphavol/estimators.hpp"
#include "alphavol/harness/config.hpp"
#include "alphavol/harness/parallel.hpp"
#include "alphavol/harness/stats.hpp"
#include "alphavol/rng.hpp"

namespace alphavol::harness {

// stream ids; part of the RNG key so experiments never share draws
inline constexpr std::uint64_t kErrorCurveStream = 1;
inline constexpr std::uint64_t kCoverageStream = 2;
inline constexpr std::uint64_t kConvexStream = 3;

/// One replicate of one (n, j, alpha) cell of an error curve.
struct CurveRecord {
    std::size_t n = 0;
    int j = 0;
    double alpha = 0.0;
    std::size_t replicate = 0;
    double estimate = 0.0;
    double area_half_width = 0.0;  ///< certified half-width of the hull area used
    double rel_error = 0.0;
};

struct CurvePoint {
    std::size_t n = 0;
    int j = 0;
    double alpha = 0.0;
    double mean_rel_error = 0.0;
    double sd_rel_error = 0.0;
    double mean_area_half_width = 0.0;
    std::size_t replicates = 0;
};

struct ErrorCurveResult {
    double true_area = 0.0;
    std::vector<CurvePoint> points;
    std::vector<CurveRecord> raw;
};

struct CoverageRecord {
    std::size_t n = 0;
    double level = 0.0;
    std::size_t replicate = 0;
    double v_hat = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool covered = false;
};

struct CoverageRow {
    std::size_t n = 0;
    double level = 0.0;
    double coverage = 0.0;
    double mean_length = 0.0;
    std::size_t replicates = 0;
};

struct CoverageResult {
    double true_area = 0.0;
    std::vector<CoverageRow> rows;
    std::vector<CoverageRecord> raw;
};

struct ConvexRecord {
    std::size_t n = 0;
    std::size_t replicate = 0;
    std::size_t count = 0;  ///< Poisson sample size N
    double split = 0.0;
    double hull = 0.0;
    double naive = 0.0;
};

struct ConvexRow {
    std::size_t n = 0;
    std::string estimator;
    double rmse_normalized = 0.0;
    double mean_estimate = 0.0;
    std::size_t replicates = 0;
};

struct ConvexResult {
    double true_area = 0.0;
    std::vector<ConvexRow> rows;
    std::vector<ConvexRecord> raw;
};

/// Groups raw records by (n, j, alpha) in first-seen order of the config lists.
inline std::vector<CurvePoint> aggregate_error_curve(const std::vector<CurveRecord>& raw) {
    std::map<std::tuple<std::size_t, int, double>, std::vector<const CurveRecord*>> groups;
    std::vector<std::tuple<std::size_t, int, double>> order;
    for (const auto& r : raw) {
        const auto key = std::make_tuple(r.n, r.j, r.alpha);
        auto [it, fresh] = groups.try_emplace(key);
        if (fresh) order.push_back(key);
        it->second.push_back(&r);
    }
    std::vector<CurvePoint> out;
    for (const auto& key : order) {
        auto recs = groups[key];
        std::sort(recs.begin(), recs.end(), [](auto* a, auto* b) { return a->replicate < b->replicate; });
        std::vector<double> err, hw;
        for (auto* r : recs) {
            err.push_back(r->rel_error);
            hw.push_back(r->area_half_width);
        }
        out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), mean(err), sample_sd(err), mean(hw),
                       recs.size()});
    }
    return out;
}

/// Mean relative error |V - mu(S)| / mu(S) for every (n, j, alpha). Each
/// replicate draws one sample per n, shared by all j and alpha so that
/// estimators are compared on paired data.
inline ErrorCurveResult run_error_curve(const ExperimentConfig& cfg) {
    cfg.validate();
    const DomainPtr domain = parse_domain(cfg.domain);
    const Tolerance tol = Tolerance::relative(cfg.tolerance);
    const double mu = domain->area();
    const std::size_t cells = cfg.m_rule.size() * cfg.alpha_list.size();
    const std::size_t units = cfg.n_list.size() * cfg.replicates;
    std::vector<CurveRecord> raw(units * cells);

    parallel_for(units, cfg.threads, [&](std::size_t u) {
        const std::size_t ni = u / cfg.replicates;
        const std::size_t rep = cfg.replicate_offset + u % cfg.replicates;
        const std::size_t n = cfg.n_list[ni];
        Rng rng = make_stream(cfg.seed, {kErrorCurveStream, n, rep});
        const std::vector<Point> pts = sample(*domain, n, rng);
        for (std::size_t ai = 0; ai < cfg.alpha_list.size(); ++ai) {
            const double alpha = cfg.alpha_list[ai];
            for (std::size_t ji = 0; ji < cfg.m_rule.size(); ++ji) {
                const int j = cfg.m_rule[ji];
                CurveRecord rec{n, j, alpha, rep, 0.0, 0.0, 0.0};
                Rng split_rng = make_stream(cfg.seed, {kErrorCurveStream, n, rep, 1000 + static_cast<std::uint64_t>(j), ai});
                const std::size_t m = m_for(n, j);
                if (j == 10) {
                    const AreaEstimate a = plug_in(pts, alpha, tol);
                    rec.estimate = a.value;
                    rec.area_half_width = a.half_width();
                } else if (m < 1) {
                    throw std::invalid_argument("error curve: m = floor(n j / 10) is zero");
                } else if (cfg.bag_count > 0) {
                    rec.estimate = bagged_estimate(pts, alpha, m, cfg.bag_count, tol, split_rng);
                } else {
                    const SplitResult s = split_estimate(pts, alpha, m, tol, split_rng);
                    rec.estimate = s.v_hat;
                    rec.area_half_width = 0.5 * (s.mu_upper - s.mu_lower);
                }
                rec.rel_error = std::fabs(rec.estimate - mu) / mu;
                raw[(ni * cells + ai * cfg.m_rule.size() + ji) * cfg.replicates + u % cfg.replicates] = rec;
            }
        }
    });

    ErrorCurveResult res;
    res.true_area = mu;
    res.raw = std::move(raw);
    res.points = aggregate_error_curve(res.raw);
    return res;
}

/// Empirical coverage of volume_ci for each (n, level); the split is
/// m = floor(n j / 10) with j the first m_rule entry, alpha the first alpha.
inline CoverageResult run_coverage(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.kind = ExperimentKind::Coverage;
    c.validate();
    const DomainPtr domain = parse_domain(c.domain);
    const Tolerance tol = Tolerance::relative(c.tolerance);
    const double mu = domain->area();
    const double alpha = c.alpha_list.front();
    const int j = c.m_rule.front();
    const std::size_t levels = c.ci_levels.size();
    const std::size_t units = c.n_list.size() * c.replicates;
    std::vector<CoverageRecord> raw(units * levels);

    parallel_for(units, c.threads, [&](std::size_t u) {
        const std::size_t ni = u / c.replicates;
        const std::size_t rep = c.replicate_offset + u % c.replicates;
        const std::size_t n = c.n_list[ni];
        Rng rng = make_stream(c.seed, {kCoverageStream, n, rep});
        const std::vector<Point> pts = sample(*domain, n, rng);
        const SplitResult s = split_estimate(pts, alpha, std::max<std::size_t>(1, m_for(n, j)), tol, rng);
        for (std::size_t li = 0; li < levels; ++li) {
            const VolumeInterval ci = volume_ci(s, c.ci_levels[li]);
            raw[(ni * levels + li) * c.replicates + u % c.replicates] =
                CoverageRecord{n, c.ci_levels[li], rep, s.v_hat, ci.lower, ci.upper, ci.contains(mu)};
        }
    });

    CoverageResult res;
    res.true_area = mu;
    for (std::size_t ni = 0; ni < c.n_list.size(); ++ni)
        for (std::size_t li = 0; li < levels; ++li) {
            std::vector<double> cov, len;
            for (std::size_t r = 0; r < c.replicates; ++r) {
                const auto& rec = raw[(ni * levels + li) * c.replicates + r];
                cov.push_back(rec.covered ? 1.0 : 0.0);
                len.push_back(rec.upper - rec.lower);
            }
            res.rows.push_back({c.n_list[ni], c.ci_levels[li], mean(cov), mean(len), c.replicates});
        }
    res.raw = std::move(raw);
    return res;
}

/// Poisson samples at intensity n / mu(S); compares the split estimator (first
/// alpha, first j), the convex hull area and the count estimator N / lambda.
inline ConvexResult run_convex_comparison(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.kind = ExperimentKind::ConvexComparison;
    c.validate();
    const DomainPtr domain = parse_domain(c.domain);
    const Tolerance tol = Tolerance::relative(c.tolerance);
    const double mu = domain->area();
    const double alpha = c.alpha_list.front();
    const int j = c.m_rule.front();
    const std::size_t units = c.n_list.size() * c.replicates;
    std::vector<ConvexRecord> raw(units);

    parallel_for(units, c.threads, [&](std::size_t u) {
        const std::size_t ni = u / c.replicates;
        const std::size_t rep = c.replicate_offset + u % c.replicates;
        const std::size_t n = c.n_list[ni];
        const double lambda = static_cast<double>(n) / mu;
        Rng rng = make_stream(c.seed, {kConvexStream, n, rep});
        const std::vector<Point> pts = sample_poisson(*domain, lambda, rng);
        ConvexRecord rec{n, rep, pts.size(), 0.0, 0.0, static_cast<double>(pts.size()) / lambda};
        if (!pts.empty()) rec.hull = polygon_area(convex_hull(pts));
        const std::size_t m = m_for(pts.size(), j);
        if (pts.size() >= 2 && m >= 1 && m < pts.size())
            rec.split = split_estimate(pts, alpha, m, tol, rng).v_hat;
        else if (!pts.empty())
            rec.split = plug_in(pts, alpha, tol).value;  // too few points to split
        raw[u] = rec;
    });

    ConvexResult res;
    res.true_area = mu;
    for (std::size_t ni = 0; ni < c.n_list.size(); ++ni) {
        std::vector<double> es, eh, en, vs, vh, vn;
        for (std::size_t r = 0; r < c.replicates; ++r) {
            const auto& rec = raw[ni * c.replicates + r];
            es.push_back(rec.split - mu);
            eh.push_back(rec.hull - mu);
            en.push_back(rec.naive - mu);
            vs.push_back(rec.split);
            vh.push_back(rec.hull);
            vn.push_back(rec.naive);
        }
        const std::size_t n = c.n_list[ni];
        res.rows.push_back({n, "split", rms(es) / mu, mean(vs), c.replicates});
        res.rows.push_back({n, "convex_hull", rms(eh) / mu, mean(vh), c.replicates});
        res.rows.push_back({n, "naive_count", rms(en) / mu, mean(vn), c.replicates});
    }
    res.raw = std::move(raw);
    return res;
}

// ---- CSV output ----

namespace detail {

inline std::ostream& precise(std::ostream& os) {
    os.precision(17);
    return os;
}

}  // namespace detail

inline void write_csv(std::ostream& os, const ErrorCurveResult& r) {
    detail::precise(os) << "n,j,alpha,replicates,mean_rel_error,sd_rel_error,mean_area_half_width,true_area\n";
    for (const auto& p : r.points)
        os << p.n << ',' << p.j << ',' << p.alpha << ',' << p.replicates << ',' << p.mean_rel_error << ','
           << p.sd_rel_error << ',' << p.mean_area_half_width << ',' << r.true_area << '\n';
}

inline void write_raw_csv(std::ostream& os, const ErrorCurveResult& r) {
    detail::precise(os) << "n,j,alpha,replicate,estimate,area_half_width,rel_error\n";
    for (const auto& c : r.raw)
        os << c.n << ',' << c.j << ',' << c.alpha << ',' << c.replicate << ',' << c.estimate << ','
           << c.area_half_width << ',' << c.rel_error << '\n';
}

inline void write_csv(std::ostream& os, const CoverageResult& r) {
    detail::precise(os) << "n,level,replicates,coverage,mean_length,true_area\n";
    for (const auto& row : r.rows)
        os << row.n << ',' << row.level << ',' << row.replicates << ',' << row.coverage << ',' << row.mean_length
           << ',' << r.true_area << '\n';
}

inline void write_raw_csv(std::ostream& os, const CoverageResult& r) {
    detail::precise(os) << "n,level,replicate,v_hat,lower,upper,covered\n";
    for (const auto& c : r.raw)
        os << c.n << ',' << c.level << ',' << c.replicate << ',' << c.v_hat << ',' << c.lower << ',' << c.upper << ','
           << (c.covered ? 1 : 0) << '\n';
}

inline void write_csv(std::ostream& os, const ConvexResult& r) {
    detail::precise(os) << "n,estimator,replicates,rmse_normalized,mean_estimate,true_area\n";
    for (const auto& row : r.rows)
        os << row.n << ',' << row.estimator << ',' << row.replicates << ',' << row.rmse_normalized << ','
           << row.mean_estimate << ',' << r.true_area << '\n';
}

inline void write_raw_csv(std::ostream& os, const ConvexResult& r) {
    detail::precise(os) << "n,replicate,count,split,convex_hull,naive_count\n";
    for (const auto& c : r.raw)
        os << c.n << ',' << c.replicate << ',' << c.count << ',' << c.split << ',' << c.hull << ',' << c.naive << '\n';
}

template <class Result>
std::string to_csv(const Result& r) {
    std::ostringstream os;
    write_csv(os, r);
    return os.str();
}

template <class Result>
std::string to_raw_csv(const Result& r) {
    std::ostringstream os;
    write_raw_csv(os, r);
    return os.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace alphavol::harness
