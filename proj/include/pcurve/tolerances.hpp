#pragma once

#include <algorithm>
#include <cstdlib>
#include <numbers>
#include <string>

namespace pcurve {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Tolerances {
    // Closure tolerance is relative: the effective value is closure * max(1, ell).
    double closure = 1e-9;
    double winding = 1e-6;
    double angle_floor = 1e-3;
    double regularity_floor = 1e-6;
    double theorem = 1e-6;
    double ill_conditioned_gap = 1e-3;

    double closure_for(double ell) const { return closure * std::max(1.0, ell); }
    double cluster_radius(double ell) const { return 10.0 * closure_for(ell); }
};

/// Default tolerances, with the closure tolerance optionally overridden by the
/// PCURVE_TOL environment variable.
inline Tolerances default_tolerances() {
    Tolerances tol;
    if (const char* env = std::getenv("PCURVE_TOL")) {
        char* end = nullptr;
        double value = std::strtod(env, &end);
        if (end != env && value > 0.0) tol.closure = value;
    }
    return tol;
}

} // namespace pcurve
