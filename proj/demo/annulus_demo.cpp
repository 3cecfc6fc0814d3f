// Plug-in and split estimates on one annulus sample, plus an SVG of the hull.
#include <cstdio>
#include <fstream>

#include "alphavol.hpp"

using namespace alphavol;

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::stoul(argv[1]) : 1000;
    const double alpha = 0.25;
    const Annulus annulus(0.25, 1.0);
    Rng rng = make_stream(7, {n});
    const auto pts = sample(annulus, n, rng);

    const AreaEstimate plug = plug_in(pts, alpha);
    const SplitResult split = split_estimate(pts, alpha, n / 2, Tolerance::relative(1e-4), rng);
    const VolumeInterval ci = volume_ci(split, 0.95);

    std::printf("true area      %.6f\n", annulus.area());
    std::printf("plug-in        %.6f  [%.6f, %.6f]\n", plug.value, plug.lower, plug.upper);
    std::printf("split estimate %.6f  (p_hat %.4f, m %zu)\n", split.v_hat, split.p_hat, split.m);
    std::printf("95%% interval   [%.6f, %.6f]\n", ci.lower, ci.upper);

    std::ofstream svg("annulus_hull.svg");
    write_hull_svg(svg, AlphaHull::build(pts, alpha));
    std::printf("wrote annulus_hull.svg\n");
}
