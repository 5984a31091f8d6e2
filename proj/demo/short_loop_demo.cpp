// Builds a prolate cycloid, finds its crossing and prints the short loop and
// the curvature bound it forces.

#include <cstdio>

#include "pcurve/pcurve.hpp"

int main() {
    using namespace pcurve;
    CurveSpec spec;
    spec.label = "prolate";
    spec.x_sin = {-1.5};
    spec.y_cos = {1.5};

    const ArcCurve curve = reparametrize_arclength(spec);
    const auto crossings = find_crossings(curve);
    std::printf("ell = %.12f, %zu crossing(s)\n", curve.ell(), crossings.size());
    for (const Crossing& c : crossings)
        std::printf("  s1 = %.9f  s2 = %.9f  winding %d  alpha %.6f\n", c.s1, c.s2, c.winding, c.alpha);

    if (const auto loop = locate_short_loop(curve, crossings)) {
        std::printf("short loop [%.9f, %.9f], length %.9f <= %.9f (%s)\n", loop->witness.a, loop->witness.b,
                    loop->witness.length(), curve.ell() - kTwoPi, std::string(to_string(loop->route)).c_str());
    }
    const auto cb = check_curvature_bound(curve, !crossings.empty());
    std::printf("max |kappa| = %.9f, bound = %.9f, %s\n", cb.max_curvature, cb.bound.value_or(0.0),
                std::string(to_string(cb.status)).c_str());
    return 0;
}
