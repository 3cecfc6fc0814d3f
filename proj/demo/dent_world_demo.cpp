// Geometry of a dented disk: dent depth, aperture, removed area and its cap bracket.
#include <cstdio>

#include "alphavol.hpp"

using namespace alphavol;

int main() {
    const DentWorld w = DentWorld::with_dents(3.0, 1.2, 2.5, 1);
    std::printf("theta %.4f deg, h %.4f, %zu dent directions\n", w.theta() * 180.0 / std::numbers::pi, w.h(),
                w.dent_directions().size());
    std::printf("eta %.8f in [%.8f, %.8f]\n", w.eta(), w.cap_at_depth_h(), w.cap_at_aperture());
    std::printf("area %.8f (disk %.8f)\n", w.area(), std::numbers::pi * 9.0);
}
