#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "alphavol/geom.hpp"
#include "alphavol/harness/experiments.hpp"
#include "alphavol/harness/plot.hpp"
#include "alphavol/harness/stats.hpp"

namespace alphavol::harness {

/// Point file: CSV with header `x,y`.
inline std::vector<Point> read_points(std::istream& is) {
    const CsvTable t = read_csv(is);
    const std::size_t cx = t.column("x"), cy = t.column("y");
    std::vector<Point> pts;
    pts.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) pts.emplace_back(t.number(r, cx), t.number(r, cy));
    return pts;
}

inline std::vector<Point> read_points_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_points(in);
}

inline void write_points(std::ostream& os, const std::vector<Point>& pts) {
    os.precision(17);
    os << "x,y\n";
    for (const auto& p : pts) os << p.x << ',' << p.y << '\n';
}

/// Writes `<stem>.csv`, `<stem>_raw.csv` and, when a style is given, `<stem>.svg`.
template <class Result>
std::vector<std::filesystem::path> write_outputs(const Result& r, const std::string& dir, const std::string& stem,
                                                 const std::optional<PlotStyle>& style) {
    const std::filesystem::path base(dir);
    std::vector<std::filesystem::path> written{base / (stem + ".csv"), base / (stem + "_raw.csv")};
    const std::string csv = to_csv(r);
    write_text_file(written[0], csv);
    write_text_file(written[1], to_raw_csv(r));
    if (style) {
        std::istringstream is(csv);
        write_text_file(base / (stem + ".svg"), render_plot_svg(read_csv(is), *style));
        written.push_back(base / (stem + ".svg"));
    }
    return written;
}

struct SeriesFit {
    int j = 0;
    double alpha = 0.0;
    RateFit fit;
};

/// Rate fit of mean_rel_error against n for each (j, alpha) series of an
/// error-curve CSV.
inline std::vector<SeriesFit> rate_check(const CsvTable& t) {
    const std::size_t cn = t.column("n"), cj = t.column("j"), ca = t.column("alpha"), ce = t.column("mean_rel_error");
    std::map<std::pair<int, double>, std::vector<std::pair<double, double>>> groups;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        groups[{static_cast<int>(t.number(r, cj)), t.number(r, ca)}].push_back({t.number(r, cn), t.number(r, ce)});
    std::vector<SeriesFit> out;
    for (const auto& [key, pts] : groups) out.push_back({key.first, key.second, fit_rate(pts)});
    return out;
}

}  // namespace alphavol::harness
