#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>

#include "alphavol/harness/config.hpp"
#include "alphavol/harness/experiments.hpp"
#include "alphavol/harness/io.hpp"
#include "alphavol/harness/plot.hpp"
#include "alphavol/harness/stats.hpp"

using namespace alphavol;
using namespace alphavol::harness;

namespace {

ExperimentConfig parse(const std::string& text, ExperimentKind kind = ExperimentKind::ErrorCurve) {
    std::istringstream is(text);
    return parse_config(is, kind);
}

ExperimentConfig small_curve() {
    ExperimentConfig c = ExperimentConfig::defaults(ExperimentKind::ErrorCurve);
    c.alpha_list = {0.25};
    c.n_list = {100, 200};
    c.m_rule = {5, 10};
    c.replicates = 4;
    c.threads = 1;
    return c;
}

std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("alphavol_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

TEST(Config, DefaultsPerKind) {
    const auto e = ExperimentConfig::defaults(ExperimentKind::ErrorCurve);
    EXPECT_EQ(e.domain, "annulus(0.25,1)");
    EXPECT_EQ(e.n_list, (std::vector<std::size_t>{250, 500, 1000, 2000, 4000}));
    EXPECT_EQ(e.replicates, 200u);
    const auto v = ExperimentConfig::defaults(ExperimentKind::ConvexComparison);
    EXPECT_EQ(v.domain, "ellipse(5,2)");
    EXPECT_EQ(v.alpha_list, (std::vector<double>{10.0}));
    EXPECT_EQ(ExperimentConfig::defaults(ExperimentKind::Coverage).ci_levels.size(), 10u);
}

TEST(Config, ParsesKeysListsAndComments) {
    const auto c = parse(
        "# comment\n"
        "domain = dent_world(3, 1.2, 0.5, 4)\n"
        "alpha_list = [0.1, 0.2]\n"
        "n_list = 100 200 400   # trailing\n"
        "m_rule = {5}\n"
        "replicates = 7\n"
        "replicate_offset = 3\n"
        "seed = 99\n"
        "tolerance = 1e-3\n"
        "threads = 2\n");
    EXPECT_EQ(c.domain, "dent_world(3, 1.2, 0.5, 4)");
    EXPECT_EQ(c.alpha_list, (std::vector<double>{0.1, 0.2}));
    EXPECT_EQ(c.n_list, (std::vector<std::size_t>{100, 200, 400}));
    EXPECT_EQ(c.m_rule, (std::vector<int>{5}));
    EXPECT_EQ(c.replicates, 7u);
    EXPECT_EQ(c.replicate_offset, 3u);
    EXPECT_EQ(c.seed, 99u);
    EXPECT_EQ(c.tolerance, 1e-3);
    EXPECT_EQ(c.threads, 2u);
}

TEST(Config, RejectsBadInput) {
    EXPECT_THROW(parse("bogus = 1\n"), std::invalid_argument);
    EXPECT_THROW(parse("no equals sign\n"), std::invalid_argument);
    EXPECT_THROW(parse("alpha_list = -1\n"), std::invalid_argument);
    EXPECT_THROW(parse("n_list = 1\n"), std::invalid_argument);
    EXPECT_THROW(parse("n_list = 10.5\n"), std::invalid_argument);
    EXPECT_THROW(parse("m_rule = 11\n"), std::invalid_argument);
    EXPECT_THROW(parse("replicates = 0\n"), std::invalid_argument);
    EXPECT_THROW(parse("domain = torus(1)\n"), std::invalid_argument);
    EXPECT_THROW(parse("tolerance = 0\n"), std::invalid_argument);
    EXPECT_THROW(parse("experiment = coverage\n"), std::invalid_argument);
    EXPECT_THROW(parse("ci_levels = 1.0\n", ExperimentKind::Coverage), std::invalid_argument);
    EXPECT_THROW(parse("m_rule = 10\n", ExperimentKind::Coverage), std::invalid_argument);
    EXPECT_THROW(load_config("/nonexistent/cfg.conf", ExperimentKind::ErrorCurve), std::runtime_error);
    EXPECT_THROW(parse_kind("table-1"), std::invalid_argument);
    EXPECT_EQ(parse_kind(to_string(ExperimentKind::ConvexComparison)), ExperimentKind::ConvexComparison);
}

TEST(Config, MRule) {
    EXPECT_EQ(m_for(1000, 5), 500u);
    EXPECT_EQ(m_for(7, 5), 3u);
    EXPECT_EQ(m_for(250, 10), 250u);
}

TEST(Stats, MeanSdRms) {
    const std::vector<double> v{1, 2, 3, 4};
    EXPECT_DOUBLE_EQ(mean(v), 2.5);
    EXPECT_NEAR(sample_sd(v), std::sqrt(5.0 / 3.0), 1e-15);
    EXPECT_NEAR(rms(v), std::sqrt(7.5), 1e-15);
    EXPECT_EQ(sample_sd(std::vector<double>{3.0}), 0.0);
}

TEST(Stats, FitRateRecoversPowerLaws) {
    for (double slope : {-5.0 / 6.0, -2.0 / 3.0, -0.5}) {
        std::vector<std::pair<double, double>> pts;
        for (double n : {250.0, 500.0, 1000.0, 2000.0, 4000.0}) pts.push_back({n, 3.7 * std::pow(n, slope)});
        const RateFit f = fit_rate(pts);
        EXPECT_NEAR(f.slope, slope, 1e-12);
        EXPECT_NEAR(f.intercept, std::log(3.7), 1e-10);
        EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
    }
}

TEST(Stats, FitRateRejectsDegenerateInput) {
    using V = std::vector<std::pair<double, double>>;
    EXPECT_THROW(fit_rate(V{{100, 0.1}, {200, 0.05}}), std::invalid_argument);
    EXPECT_THROW(fit_rate(V{{100, 0.1}, {100, 0.05}, {100, 0.02}}), std::invalid_argument);
    EXPECT_THROW(fit_rate(V{{100, 0.1}, {200, 0.0}, {400, 0.02}}), std::invalid_argument);
}

TEST(Stats, SignTest) {
    // one-sided binomial tail with p = 1/2
    EXPECT_NEAR(sign_test_p(10, 10), std::pow(0.5, 10), 1e-15);
    EXPECT_NEAR(sign_test_p(0, 10), 1.0, 1e-15);
    EXPECT_NEAR(sign_test_p(8, 10), (45.0 + 10.0 + 1.0) / 1024.0, 1e-15);
    const std::vector<double> a{1, 2, 3, 4}, b{2, 3, 4, 4};
    // three wins, one tie dropped
    EXPECT_NEAR(paired_sign_test_less(a, b), 0.125, 1e-15);
}

TEST(Harness, NaiveCountErrorScalesLikeInverseRootN) {
    // the count estimator is N / lambda with N Poisson(n): its relative RMSE is 1/sqrt(n)
    ExperimentConfig c = ExperimentConfig::defaults(ExperimentKind::ConvexComparison);
    c.n_list = {100, 400};
    c.replicates = 400;
    c.tolerance = 1e-2;
    c.threads = 0;
    const ConvexResult r = run_convex_comparison(c);
    for (const auto& row : r.rows)
        if (row.estimator == "naive_count") {
            const double want = 1.0 / std::sqrt(static_cast<double>(row.n));
            // RMSE of 400 draws: relative sd about 1/sqrt(2*400)
            EXPECT_NEAR(row.rmse_normalized, want, 4 * want / std::sqrt(800.0)) << row.n;
        }
    EXPECT_EQ(r.rows.size(), 6u);
    EXPECT_EQ(r.raw.size(), 800u);
    EXPECT_NEAR(r.true_area, 10 * std::numbers::pi, 1e-12);
}

TEST(Harness, ErrorCurveRowsAndPairing) {
    const ErrorCurveResult r = run_error_curve(small_curve());
    ASSERT_EQ(r.points.size(), 4u);
    ASSERT_EQ(r.raw.size(), 16u);
    for (const auto& p : r.points) EXPECT_EQ(p.replicates, 4u);
    EXPECT_EQ(r.points[0].n, 100u);
    EXPECT_EQ(r.points[0].j, 5);
    EXPECT_EQ(r.points[1].j, 10);
    // the plug-in rows see the same samples as a direct plug-in call
    Rng rng = make_stream(small_curve().seed, {kErrorCurveStream, 200, 2});
    const auto pts = sample(Annulus(0.25, 1.0), 200, rng);
    const double direct = plug_in(pts, 0.25, Tolerance::relative(small_curve().tolerance)).value;
    bool seen = false;
    for (const auto& rec : r.raw)
        if (rec.n == 200 && rec.j == 10 && rec.replicate == 2) {
            EXPECT_EQ(rec.estimate, direct);
            seen = true;
        }
    EXPECT_TRUE(seen);
}

TEST(Harness, SameSeedGivesIdenticalCsv) {
    ExperimentConfig c = small_curve();
    c.replicates = 1;
    const auto a = run_error_curve(c), b = run_error_curve(c);
    EXPECT_EQ(to_csv(a), to_csv(b));
    EXPECT_EQ(to_raw_csv(a), to_raw_csv(b));
    c.seed += 1;
    EXPECT_NE(to_raw_csv(run_error_curve(c)), to_raw_csv(a));
}

TEST(Harness, ThreadCountDoesNotChangeResults) {
    ExperimentConfig c = small_curve();
    const auto one = run_error_curve(c);
    c.threads = 4;
    EXPECT_EQ(to_raw_csv(run_error_curve(c)), to_raw_csv(one));

    ExperimentConfig cv = ExperimentConfig::defaults(ExperimentKind::Coverage);
    cv.n_list = {200};
    cv.replicates = 6;
    cv.threads = 1;
    const auto c1 = run_coverage(cv);
    cv.threads = 3;
    EXPECT_EQ(to_raw_csv(run_coverage(cv)), to_raw_csv(c1));
}

TEST(Harness, ReplicateOffsetsMergeIntoTheFullRun) {
    ExperimentConfig c = small_curve();
    const auto full = run_error_curve(c);
    c.replicates = 2;
    const auto a = run_error_curve(c);
    c.replicate_offset = 2;
    const auto b = run_error_curve(c);
    std::vector<CurveRecord> merged = a.raw;
    merged.insert(merged.end(), b.raw.begin(), b.raw.end());
    auto key = [](const CurveRecord& r) { return std::make_tuple(r.n, r.j, r.alpha, r.replicate); };
    std::sort(merged.begin(), merged.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
    std::vector<CurveRecord> want = full.raw;
    std::sort(want.begin(), want.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
    ASSERT_EQ(merged.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_EQ(key(merged[i]), key(want[i]));
        EXPECT_EQ(merged[i].estimate, want[i].estimate);
    }
    const auto agg = aggregate_error_curve(merged);
    for (std::size_t i = 0; i < agg.size(); ++i) EXPECT_NEAR(agg[i].mean_rel_error, full.points[i].mean_rel_error, 1e-15);
}

TEST(Harness, CoverageRowsPerLevel) {
    ExperimentConfig c = ExperimentConfig::defaults(ExperimentKind::Coverage);
    c.n_list = {200, 300};
    c.replicates = 5;
    const CoverageResult r = run_coverage(c);
    EXPECT_EQ(r.rows.size(), 20u);
    EXPECT_EQ(r.raw.size(), 100u);
    // nested intervals: coverage and length grow with level
    for (std::size_t i = 1; i < 10; ++i) {
        EXPECT_GE(r.rows[i].coverage, r.rows[i - 1].coverage);
        EXPECT_GE(r.rows[i].mean_length, r.rows[i - 1].mean_length);
    }
}

TEST(Csv, RoundTripsThroughTheReader) {
    const auto r = run_error_curve(small_curve());
    std::istringstream is(to_csv(r));
    const CsvTable t = read_csv(is);
    ASSERT_EQ(t.rows.size(), r.points.size());
    const std::size_t ce = t.column("mean_rel_error");
    for (std::size_t i = 0; i < t.rows.size(); ++i) EXPECT_EQ(t.number(i, ce), r.points[i].mean_rel_error);
    EXPECT_THROW(t.column("nope"), std::invalid_argument);
    std::istringstream bad("a,b\n1,2,3\n");
    EXPECT_THROW(read_csv(bad), std::invalid_argument);
}

TEST(Csv, PointFilesRoundTrip) {
    Rng rng(1);
    const auto pts = sample(Ellipse(5, 2), 50, rng);
    std::ostringstream os;
    write_points(os, pts);
    std::istringstream is(os.str());
    EXPECT_EQ(read_points(is), pts);
}

TEST(Csv, RateCheckGroupsSeries) {
    std::ostringstream os;
    os << "n,j,alpha,mean_rel_error\n";
    for (double n : {100.0, 200.0, 400.0}) {
        os.precision(17);
        os << n << ",5,0.25," << 2 * std::pow(n, -5.0 / 6) << '\n';
        os << n << ",10,0.25," << std::pow(n, -2.0 / 3) << '\n';
    }
    std::istringstream is(os.str());
    const auto fits = rate_check(read_csv(is));
    ASSERT_EQ(fits.size(), 2u);
    EXPECT_EQ(fits[0].j, 5);
    EXPECT_NEAR(fits[0].fit.slope, -5.0 / 6, 1e-12);
    EXPECT_NEAR(fits[1].fit.slope, -2.0 / 3, 1e-12);
}

namespace {

CsvTable table(const std::string& text) {
    std::istringstream is(text);
    return read_csv(is);
}

std::vector<std::pair<double, double>> errbars(const std::string& svg) {
    std::vector<std::pair<double, double>> out;
    const std::regex re("class=\"errbar\" x1=\"[^\"]*\" y1=\"([^\"]*)\" x2=\"[^\"]*\" y2=\"([^\"]*)\"");
    for (std::sregex_iterator it(svg.begin(), svg.end(), re), end; it != end; ++it)
        out.push_back({std::stod((*it)[1]), std::stod((*it)[2])});
    return out;
}

}  // namespace

TEST(Plot, EmptyTableThrowsAndWritesNothing) {
    const auto dir = temp_dir("plot_empty");
    const auto csv = dir / "empty.csv";
    {
        std::ofstream out(csv);
        out << "n,j,alpha,mean_rel_error,sd_rel_error\n";
    }
    const auto svg = dir / "empty.svg";
    EXPECT_THROW(render_plot(csv.string(), error_curve_style(), svg.string()), std::invalid_argument);
    EXPECT_FALSE(std::filesystem::exists(svg));
    std::filesystem::remove_all(dir);
}

TEST(Plot, ErrorBarsScaleWithSd) {
    PlotStyle s = error_curve_style();
    s.log_x = s.log_y = false;
    const std::string svg = render_plot_svg(table("n,j,alpha,mean_rel_error,sd_rel_error\n"
                                                  "100,5,0.25,0.5,0.01\n"
                                                  "200,5,0.25,0.4,0.03\n"
                                                  "400,5,0.25,0.3,0.02\n"),
                                            s);
    const auto bars = errbars(svg);
    ASSERT_EQ(bars.size(), 3u);
    const double unit = std::fabs(bars[0].first - bars[0].second) / 0.02;
    EXPECT_GT(unit, 0.0);
    EXPECT_NEAR(std::fabs(bars[1].first - bars[1].second), unit * 0.06, 1e-6);
    EXPECT_NEAR(std::fabs(bars[2].first - bars[2].second), unit * 0.04, 1e-6);
}

TEST(Plot, LogTicksAtPowersOfTen) {
    const std::string svg = render_plot_svg(table("n,j,alpha,mean_rel_error,sd_rel_error\n"
                                                  "250,5,0.25,0.03,0.001\n"
                                                  "4000,5,0.25,0.0021,0.0001\n"),
                                            error_curve_style());
    const std::regex re("class=\"ytick-label\"[^>]*>([^<]*)<");
    std::vector<std::string> labels;
    for (std::sregex_iterator it(svg.begin(), svg.end(), re), end; it != end; ++it) labels.push_back((*it)[1]);
    EXPECT_EQ(labels, (std::vector<std::string>{"1e-3", "1e-2", "1e-1"}));
    EXPECT_THROW(render_plot_svg(table("n,j,alpha,mean_rel_error,sd_rel_error\n100,5,0.25,0,0\n"), error_curve_style()),
                 std::invalid_argument);
}

TEST(Outputs, WritesCsvRawAndSvg) {
    const auto dir = temp_dir("outputs");
    const auto files = write_outputs(run_error_curve(small_curve()), dir.string(), "curve", error_curve_style());
    ASSERT_EQ(files.size(), 3u);
    for (const auto& f : files) EXPECT_GT(std::filesystem::file_size(f), 0u);
    std::filesystem::remove_all(dir);
}
