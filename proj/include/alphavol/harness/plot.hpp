#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "alphavol/domain_spec.hpp"
#include "alphavol/harness/experiments.hpp"

namespace alphavol::harness {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw std::invalid_argument("csv: no column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    }
    double number(std::size_t row, std::size_t col) const {
        return alphavol::detail::parse_real(rows[row][col], header[col]);
    }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cells.push_back(alphavol::detail::trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

/// Plain comma-separated table with a header row; no quoting.
inline CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("csv: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    t.header = split_csv_line(line);
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (alphavol::detail::trim(line).empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != t.header.size()) throw std::invalid_argument("csv: row width does not match header");
        t.rows.push_back(std::move(cells));
    }
    return t;
}

inline CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_csv(in);
}

struct PlotStyle {
    std::string x_column = "n";
    std::string y_column = "mean_rel_error";
    std::optional<std::string> error_column = "sd_rel_error";  ///< one-sd bars when set
    std::vector<std::string> series_columns{"j", "alpha"};
    bool log_x = true;
    bool log_y = true;
    std::string title;
    double width = 640.0;
    double height = 420.0;
};

inline PlotStyle error_curve_style() { return PlotStyle{}; }

inline PlotStyle convex_style() {
    PlotStyle s;
    s.y_column = "rmse_normalized";
    s.error_column.reset();
    s.series_columns = {"estimator"};
    return s;
}

inline PlotStyle coverage_style() {
    PlotStyle s;
    s.x_column = "level";
    s.y_column = "coverage";
    s.error_column.reset();
    s.series_columns = {"n"};
    s.log_x = false;
    s.log_y = false;
    return s;
}

/// Renders a line chart of the table as a self-contained SVG document.
inline std::string render_plot_svg(const CsvTable& t, const PlotStyle& style) {
    if (t.rows.empty()) throw std::invalid_argument("plot: no data rows");
    const std::size_t cx = t.column(style.x_column), cy = t.column(style.y_column);
    const std::optional<std::size_t> ce =
        style.error_column ? std::optional<std::size_t>(t.column(*style.error_column)) : std::nullopt;
    std::vector<std::size_t> cs;
    for (const auto& s : style.series_columns) cs.push_back(t.column(s));

    struct Pt {
        double x, y, e;
    };
    std::map<std::string, std::vector<Pt>> series;
    std::vector<std::string> order;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        std::string label;
        for (std::size_t k = 0; k < cs.size(); ++k)
            label += (k ? " " : "") + t.header[cs[k]] + "=" + t.rows[r][cs[k]];
        if (!series.count(label)) order.push_back(label);
        series[label].push_back({t.number(r, cx), t.number(r, cy), ce ? t.number(r, *ce) : 0.0});
    }

    auto tx = [&](double v) { return style.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return style.log_y ? std::log10(v) : v; };
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& [_, pts] : series)
        for (const auto& p : pts) {
            if ((style.log_x && !(p.x > 0.0)) || (style.log_y && !(p.y > 0.0)))
                throw std::invalid_argument("plot: nonpositive value on a log axis");
            x0 = std::min(x0, tx(p.x));
            x1 = std::max(x1, tx(p.x));
            const double lo = style.log_y ? p.y : p.y - p.e;
            const double hi = p.y + p.e;
            y0 = std::min(y0, ty(lo));
            y1 = std::max(y1, ty(hi));
        }
    if (style.log_y) {
        y0 = std::floor(y0);
        y1 = std::max(std::ceil(y1), y0 + 1.0);
    }
    if (x1 <= x0) x1 = x0 + 1.0;
    if (y1 <= y0) y1 = y0 + 1.0;

    const double left = 70, right = 160, top = 30, bottom = 50;
    const double pw = style.width - left - right, ph = style.height - top - bottom;
    auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * pw; };
    auto py_t = [&](double tv) { return top + (y1 - tv) / (y1 - y0) * ph; };
    auto py = [&](double v) { return py_t(ty(v)); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
    std::ostringstream os;
    os.precision(10);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\"" << style.height
       << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"#444\"/>\n";
    if (!style.title.empty()) os << "<text x=\"" << left << "\" y=\"18\">" << style.title << "</text>\n";

    // y ticks: integer powers of ten on a log axis, five even steps otherwise
    if (style.log_y) {
        for (double e = y0; e <= y1 + 1e-9; e += 1.0) {
            const double yy = py_t(e);
            os << "<line class=\"ytick\" x1=\"" << left - 4 << "\" y1=\"" << yy << "\" x2=\"" << left << "\" y2=\"" << yy
               << "\" stroke=\"#444\"/>\n";
            os << "<text class=\"ytick-label\" x=\"" << left - 6 << "\" y=\"" << yy + 4
               << "\" text-anchor=\"end\">1e" << static_cast<int>(e) << "</text>\n";
        }
    } else {
        for (int k = 0; k <= 5; ++k) {
            const double v = y0 + (y1 - y0) * k / 5.0;
            const double yy = py_t(v);
            os << "<line class=\"ytick\" x1=\"" << left - 4 << "\" y1=\"" << yy << "\" x2=\"" << left << "\" y2=\"" << yy
               << "\" stroke=\"#444\"/>\n";
            os << "<text class=\"ytick-label\" x=\"" << left - 6 << "\" y=\"" << yy + 4 << "\" text-anchor=\"end\">"
               << v << "</text>\n";
        }
    }
    std::vector<double> xs;
    for (const auto& [_, pts] : series)
        for (const auto& p : pts) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (double v : xs)
        os << "<text class=\"xtick-label\" x=\"" << px(v) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">"
           << v << "</text>\n";
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << style.height - 10 << "\" text-anchor=\"middle\">"
       << style.x_column << "</text>\n";
    os << "<text x=\"14\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 14 " << top + ph / 2
       << ")\" text-anchor=\"middle\">" << style.y_column << (style.log_y ? " (log10)" : "") << "</text>\n";

    std::size_t si = 0;
    for (const auto& label : order) {
        const auto& pts = series[label];
        const char* col = colors[si % std::size(colors)];
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : pts) os << px(p.x) << ',' << py(p.y) << ' ';
        os << "\"/>\n";
        for (const auto& p : pts) {
            os << "<circle cx=\"" << px(p.x) << "\" cy=\"" << py(p.y) << "\" r=\"2.5\" fill=\"" << col << "\"/>\n";
            if (ce && p.e > 0.0) {
                const double lo = style.log_y ? std::max(p.y - p.e, std::pow(10.0, y0)) : p.y - p.e;
                os << "<line class=\"errbar\" x1=\"" << px(p.x) << "\" y1=\"" << py(lo) << "\" x2=\"" << px(p.x)
                   << "\" y2=\"" << py(p.y + p.e) << "\" stroke=\"" << col << "\"/>\n";
            }
        }
        const double ly = top + 14.0 * static_cast<double>(si) + 8.0;
        os << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 28 << "\" y2=\"" << ly
           << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << left + pw + 32 << "\" y=\"" << ly + 4 << "\">" << label << "</text>\n";
        ++si;
    }
    os << "</svg>\n";
    return os.str();
}

/// Reads a harness CSV and writes the chart. Nothing is written on error.
inline void render_plot(const std::string& csv_path, const PlotStyle& style, const std::string& svg_path) {
    const std::string svg = render_plot_svg(read_csv_file(csv_path), style);
    write_text_file(svg_path, svg);
}

}  // namespace alphavol::harness
