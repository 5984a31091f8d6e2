#pragma once

#include <cmath>

#include "pcurve/arc_curve.hpp"
#include "pcurve/tolerances.hpp"

namespace pcurve {

/// A point of the cylinder S^1 x R, with the circle coordinate phi in [0, 2pi).
struct CylinderPoint {
    double phi = 0.0;
    double v = 0.0;

    friend bool operator==(const CylinderPoint&, const CylinderPoint&) = default;
};

inline double reduce_phi(double u) {
    double phi = std::fmod(u, kTwoPi);
    if (phi < 0.0) phi += kTwoPi;
    if (phi >= kTwoPi) phi -= kTwoPi;
    return phi;
}

inline CylinderPoint to_cylinder(Vec2 p) { return {reduce_phi(p.x), p.y}; }

inline double cylinder_distance(CylinderPoint a, CylinderPoint b) {
    double dphi = std::abs(a.phi - b.phi);
    dphi = std::min(dphi, kTwoPi - dphi);
    return std::hypot(dphi, a.v - b.v);
}

/// The projection s -> (e^{i u(s)}, v(s)); periodic in s with period ell.
inline CylinderPoint project(const ArcCurve& curve, double s) {
    return to_cylinder(curve.point(curve.reduce(s).first));
}

} // namespace pcurve
