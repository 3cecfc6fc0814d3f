#pragma once

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "alphavol/alpha_hull.hpp"

namespace alphavol {

/// Writes the sample and the free-boundary arcs as a standalone SVG document.
/// The y axis is flipped so the picture matches the usual orientation.
inline void write_hull_svg(std::ostream& os, const AlphaHull& hull, double pixels = 600.0) {
    const double a = hull.alpha();
    BoundingBox box = bounding_box(hull.points());
    box.min_x -= a;
    box.min_y -= a;
    box.max_x += a;
    box.max_y += a;
    const double scale = pixels / std::max(box.width(), box.height());
    auto sx = [&](double x) { return (x - box.min_x) * scale; };
    auto sy = [&](double y) { return (box.max_y - y) * scale; };

    os.precision(10);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << box.width() * scale << "\" height=\""
       << box.height() * scale << "\">\n";
    os << "<g fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1\">\n";
    for (const Arc& arc : hull.free_boundary()) {
        const double r = a * scale;
        if (arc.interval.is_full()) {
            os << "<circle cx=\"" << sx(arc.center.x) << "\" cy=\"" << sy(arc.center.y) << "\" r=\"" << r << "\"/>\n";
            continue;
        }
        const Point p0 = arc.start_point();
        const Point p1 = arc.end_point();
        const int large = arc.interval.extent() > std::numbers::pi ? 1 : 0;
        // counterclockwise in world space is clockwise (sweep 0) after the flip
        os << "<path d=\"M " << sx(p0.x) << ' ' << sy(p0.y) << " A " << r << ' ' << r << " 0 " << large << " 0 "
           << sx(p1.x) << ' ' << sy(p1.y) << "\"/>\n";
    }
    os << "</g>\n<g fill=\"#2c3e50\">\n";
    const double dot = std::max(1.0, 0.004 * pixels);
    for (const Point& p : hull.points())
        os << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y) << "\" r=\"" << dot << "\"/>\n";
    os << "</g>\n</svg>\n";
}

inline std::string hull_svg(const AlphaHull& hull, double pixels = 600.0) {
    std::ostringstream os;
    write_hull_svg(os, hull, pixels);
    return os.str();
}

}  // namespace alphavol
