#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "alphavol.hpp"

using namespace alphavol;
namespace hs = alphavol::harness;

namespace {

Tolerance pick_tolerance(const std::optional<double>& abs_tol, double rel_tol) {
    return abs_tol ? Tolerance::absolute(*abs_tol) : Tolerance::relative(rel_tol);
}

void print_area(const AreaEstimate& a) {
    std::printf("area %.12g\nlower %.12g\nupper %.12g\ntolerance %.6g\ncells %zu\n", a.value, a.lower, a.upper,
                a.tolerance_used, a.cells_processed);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alpha-convex hull volume estimation toolkit"};
    app.require_subcommand(1);

    // hull
    auto* hull = app.add_subcommand("hull", "alpha-convex hull of a point file (CSV with header x,y)");
    hull->require_subcommand(1);
    std::string points_path;
    double alpha = 0.25;
    std::optional<double> abs_tol;
    double rel_tol = AlphaHull::kDefaultRelativeTolerance;

    auto* h_area = hull->add_subcommand("area", "certified area bounds");
    h_area->add_option("points", points_path, "point CSV")->required()->check(CLI::ExistingFile);
    h_area->add_option("--alpha", alpha, "disk radius")->required();
    h_area->add_option("--tol", abs_tol, "absolute tolerance (default: relative to the bounding box)");
    h_area->add_option("--rel-tol", rel_tol, "tolerance as a fraction of the hull bounding-box area");

    double qx = 0.0, qy = 0.0;
    auto* h_contains = hull->add_subcommand("contains", "membership of a query point");
    h_contains->add_option("points", points_path, "point CSV")->required()->check(CLI::ExistingFile);
    h_contains->add_option("--alpha", alpha, "disk radius")->required();
    h_contains->add_option("--x", qx)->required();
    h_contains->add_option("--y", qy)->required();

    std::string svg_out;
    auto* h_svg = hull->add_subcommand("svg", "dump boundary arcs as SVG");
    h_svg->add_option("points", points_path, "point CSV")->required()->check(CLI::ExistingFile);
    h_svg->add_option("--alpha", alpha, "disk radius")->required();
    h_svg->add_option("--out", svg_out, "output file (default: stdout)");

    // sample
    std::string domain_spec = "annulus(0.25,1)";
    std::size_t n = 1000;
    std::uint64_t seed = 1;
    auto* samp = app.add_subcommand("sample", "draw points from a domain, CSV to stdout");
    samp->add_option("--domain", domain_spec, "domain spec, e.g. annulus(0.25,1)");
    samp->add_option("--n", n, "number of points");
    samp->add_option("--seed", seed);

    // estimate
    auto* est = app.add_subcommand("estimate", "one volume estimate on a fresh sample");
    est->require_subcommand(1);
    std::optional<std::size_t> m;
    std::size_t b = 100;
    double level = 0.95;
    auto add_common = [&](CLI::App* c) {
        c->add_option("--domain", domain_spec, "domain spec");
        c->add_option("--n", n, "sample size");
        c->add_option("--alpha", alpha, "disk radius");
        c->add_option("--seed", seed);
        c->add_option("--rel-tol", rel_tol, "area tolerance relative to the hull bounding box");
    };
    auto* e_split = est->add_subcommand("split", "sample-splitting estimator with a Wilson interval");
    add_common(e_split);
    e_split->add_option("--m", m, "first-subsample size (default n/2)");
    e_split->add_option("--level", level, "confidence level");
    auto* e_plug = est->add_subcommand("plugin", "area of the hull of the whole sample");
    add_common(e_plug);
    auto* e_bag = est->add_subcommand("bagged", "mean of b split estimates");
    add_common(e_bag);
    e_bag->add_option("--m", m, "first-subsample size (default n/2)");
    e_bag->add_option("--b", b, "number of splits");

    // experiment
    auto* exp = app.add_subcommand("experiment", "run an experiment from a key = value config file");
    exp->require_subcommand(1);
    std::string config_path;
    std::optional<unsigned> threads;
    std::optional<std::size_t> replicates;
    std::optional<std::string> output_dir;
    for (const char* kind : {"error-curve", "coverage", "convex-compare"}) {
        auto* c = exp->add_subcommand(kind, std::string("run the ") + kind + " experiment");
        c->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
        c->add_option("--threads", threads, "worker threads (default: all cores)");
        c->add_option("--replicates", replicates, "override B");
        c->add_option("--output-dir", output_dir, "override output_dir");
    }

    // rate-check
    std::string csv_path;
    auto* rate = app.add_subcommand("rate-check", "log-log slope of each series in an error-curve CSV");
    rate->add_option("--csv", csv_path, "error_curve.csv")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (hull->parsed()) {
            const auto pts = hs::read_points_file(points_path);
            const AlphaHull h = AlphaHull::build(pts, alpha);
            if (h_area->parsed()) print_area(h.area(pick_tolerance(abs_tol, rel_tol)));
            if (h_contains->parsed()) {
                const Point q(qx, qy);
                std::printf("%s\nclearance %.12g\n", h.contains(q) ? "inside" : "outside", h.clearance(q));
            }
            if (h_svg->parsed()) {
                if (svg_out.empty()) {
                    write_hull_svg(std::cout, h);
                } else {
                    std::ofstream out(svg_out);
                    if (!out) throw std::runtime_error("cannot write " + svg_out);
                    write_hull_svg(out, h);
                }
            }
        } else if (samp->parsed()) {
            const DomainPtr d = parse_domain(domain_spec);
            Rng rng = make_stream(seed, {0});
            hs::write_points(std::cout, sample(*d, n, rng));
        } else if (est->parsed()) {
            const DomainPtr d = parse_domain(domain_spec);
            Rng rng = make_stream(seed, {0});
            const auto pts = sample(*d, n, rng);
            const Tolerance tol = Tolerance::relative(rel_tol);
            const std::size_t mm = m.value_or(n / 2);
            std::printf("domain %s\ntrue_area %.12g\n", domain_spec.c_str(), d->area());
            if (e_split->parsed()) {
                const SplitResult s = split_estimate(pts, alpha, mm, tol, rng);
                const VolumeInterval ci = volume_ci(s, level);
                std::printf("v_hat %.12g\nmu_hat_s %.12g\np_hat %.12g\noutside %zu of %zu\nclamped %s\n", s.v_hat,
                            s.mu_hat_s, s.p_hat, s.outside, s.trials(), s.clamped ? "yes" : "no");
                std::printf("ci %.12g %.12g (level %.4g)\n", ci.lower, ci.upper, ci.level);
            } else if (e_plug->parsed()) {
                print_area(plug_in(pts, alpha, tol));
            } else if (e_bag->parsed()) {
                std::printf("bagged %.12g\n", bagged_estimate(pts, alpha, mm, b, tol, rng));
            }
        } else if (exp->parsed()) {
            for (auto* sub : exp->get_subcommands()) {
                const hs::ExperimentKind kind = hs::parse_kind(sub->get_name());
                hs::ExperimentConfig cfg = hs::load_config(config_path, kind);
                if (threads) cfg.threads = *threads;
                if (replicates) cfg.replicates = *replicates;
                if (output_dir) cfg.output_dir = *output_dir;
                std::vector<std::filesystem::path> files;
                if (kind == hs::ExperimentKind::ErrorCurve) {
                    const auto r = hs::run_error_curve(cfg);
                    files = hs::write_outputs(r, cfg.output_dir, "error_curve", hs::error_curve_style());
                    for (const auto& p : r.points)
                        std::printf("n=%zu j=%d alpha=%g mean_rel_error=%.6g sd=%.6g\n", p.n, p.j, p.alpha,
                                    p.mean_rel_error, p.sd_rel_error);
                } else if (kind == hs::ExperimentKind::Coverage) {
                    const auto r = hs::run_coverage(cfg);
                    files = hs::write_outputs(r, cfg.output_dir, "coverage", hs::coverage_style());
                    for (const auto& row : r.rows)
                        std::printf("n=%zu level=%.2f coverage=%.4f mean_length=%.4f\n", row.n, row.level,
                                    row.coverage, row.mean_length);
                } else {
                    const auto r = hs::run_convex_comparison(cfg);
                    files = hs::write_outputs(r, cfg.output_dir, "convex_compare", hs::convex_style());
                    for (const auto& row : r.rows)
                        std::printf("n=%zu %s rmse/mu=%.6g\n", row.n, row.estimator.c_str(), row.rmse_normalized);
                }
                for (const auto& f : files) std::printf("wrote %s\n", f.string().c_str());
            }
        } else if (rate->parsed()) {
            for (const auto& s : hs::rate_check(hs::read_csv_file(csv_path)))
                std::printf("j=%d alpha=%g slope=%.4f intercept=%.4f r2=%.4f\n", s.j, s.alpha, s.fit.slope,
                            s.fit.intercept, s.fit.r_squared);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
