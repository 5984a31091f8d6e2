#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "pcurve/arc_curve.hpp"
#include "pcurve/crossings.hpp"
#include "pcurve/error.hpp"
#include "pcurve/gauss_legendre.hpp"
#include "pcurve/loops.hpp"

namespace pcurve {

/// Integral of |kappa| ds over [a, b], split at sign changes of kappa.
inline double total_abs_curvature(const ArcCurve& curve, double a, double b) {
    const auto& spec = curve.spec();
    auto kernel = [&spec](double t) {
        const RawJet j = raw_jet(spec, t);
        return cross(j.d1, j.d2) / dot(j.d1, j.d1);  // kappa * speed
    };
    const double ta = curve.t_of_s(a);
    const double tb = curve.t_of_s(b);
    const auto panels = static_cast<int>(std::max(16.0, std::ceil((b - a) / curve.spacing())));
    const double w = (tb - ta) / panels;
    const auto& rule = detail::gauss16();
    auto abs_kernel = [&](double t) { return std::abs(kernel(t)); };
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) {
        double lo = ta + i * w, hi = lo + w;
        double flo = kernel(lo), fhi = kernel(hi);
        if (flo * fhi < 0.0) {
            double x0 = lo, x1 = hi, f0 = flo;
            for (int it = 0; it < 100 && x1 - x0 > 1e-15; ++it) {
                const double m = 0.5 * (x0 + x1);
                const double fm = kernel(m);
                if ((fm < 0.0) == (f0 < 0.0)) { x0 = m; f0 = fm; } else { x1 = m; }
            }
            const double root = 0.5 * (x0 + x1);
            sum += rule.integrate(abs_kernel, lo, root) + rule.integrate(abs_kernel, root, hi);
        } else {
            sum += rule.integrate(abs_kernel, lo, hi);
        }
    }
    return sum;
}

/// max |kappa| over [a, b].
inline double max_abs_curvature_on(const ArcCurve& curve, double a, double b) {
    const auto& spec = curve.spec();
    auto f = [&spec](double t) { return std::abs(raw_jet(spec, t).signed_curvature()); };
    const double ta = curve.t_of_s(a), tb = curve.t_of_s(b);
    const auto n = static_cast<int>(std::max(64.0, 2.0 * std::ceil((b - a) / curve.spacing())));
    const double w = (tb - ta) / n;
    int best = 0;
    double best_val = f(ta);
    for (int i = 1; i <= n; ++i) {
        const double v = f(ta + i * w);
        if (v > best_val) { best_val = v; best = i; }
    }
    double lo = ta + std::max(0, best - 1) * w, hi = ta + std::min(n, best + 1) * w;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
        if (f1 > f2) { hi = x2; x2 = x1; f2 = f1; x1 = hi - g * (hi - lo); f1 = f(x1); }
        else { lo = x1; x1 = x2; f1 = f2; x2 = lo + g * (hi - lo); f2 = f(x2); }
    }
    return std::max(best_val, f(0.5 * (lo + hi)));
}

// ---------------------------------------------------------------------------
// Short loop

enum class ShortLoopRoute { None, WindingZero, WindingOneTranslate, WindingMinusOneComplement };

inline std::string_view to_string(ShortLoopRoute r) {
    switch (r) {
    case ShortLoopRoute::None: return "none";
    case ShortLoopRoute::WindingZero: return "winding-0";
    case ShortLoopRoute::WindingOneTranslate: return "winding-1-translate";
    case ShortLoopRoute::WindingMinusOneComplement: return "winding-minus-1-complement";
    }
    return "unknown";
}

struct ShortLoop {
    Loop witness;                  // planar loop p(a) = p(b)
    ShortLoopRoute route = ShortLoopRoute::None;
    Loop minimal;                  // minimal sub-loop of the first crossing's loop
    std::optional<Loop> winding_one;  // winding-one loop used on the complement route
    Loop oracle;                   // shortest planar crossing loop over all translates
};

/// Planar loop of length d for each cylinder crossing: p(s2) = p(s1 + k*ell).
inline Loop planar_loop(const ArcCurve& curve, const Crossing& c) {
    auto [lo, hi] = planar_pair(curve, c);
    return {lo, hi, LoopKind::PlaneLoop, 0};
}

/// The proof pipeline: first crossing -> its minimal sub-loop -> (winding 0)
/// the loop itself, (winding 1) the translate p(b) = p(a + ell), (winding -1)
/// the winding-2 complement reduced to winding 1 by the extractor. The result
/// is cross-checked against the brute-force minimum over all crossings.
inline std::optional<ShortLoop> locate_short_loop(const ArcCurve& curve,
                                                  const std::vector<Crossing>& crossings) {
    if (crossings.empty()) return std::nullopt;
    for (std::size_t i = 0; i < crossings.size(); ++i) detail::require_simple(crossings, i);

    const double ell = curve.ell();
    ShortLoop out;
    out.minimal = minimal_subloop(curve, crossings, crossing_loop(crossings.front()));
    switch (out.minimal.winding) {
    case 0:
        out.route = ShortLoopRoute::WindingZero;
        out.witness = {out.minimal.a, out.minimal.b, LoopKind::PlaneLoop, 0};
        break;
    case 1:
        out.route = ShortLoopRoute::WindingOneTranslate;
        out.witness = {out.minimal.b, out.minimal.a + ell, LoopKind::PlaneLoop, 0};
        break;
    default: {
        out.route = ShortLoopRoute::WindingMinusOneComplement;
        const Loop complement = complement_loop(curve, out.minimal);
        const Loop one = extract_winding_one_subloop(curve, crossings, complement);
        out.winding_one = one;
        out.witness = {one.b, one.a + ell, LoopKind::PlaneLoop, 0};
        break;
    }
    }
    const Vec2 pa = curve.point(out.witness.a), pb = curve.point(out.witness.b);
    if (norm(pa - pb) > 10.0 * curve.closure_tolerance()) {
        throw CurveError(ErrorCode::PipelineMismatch, "witness loop does not close in the plane");
    }

    out.oracle = planar_loop(curve, crossings.front());
    for (const Crossing& c : crossings) {
        const Loop l = planar_loop(curve, c);
        if (l.length() < out.oracle.length()) out.oracle = l;
    }
    const double bound = ell - kTwoPi + curve.tolerances().theorem;
    if (out.witness.length() > bound && out.oracle.length() <= bound) {
        throw CurveError(ErrorCode::PipelineMismatch,
                         "pipeline witness " + std::to_string(out.witness.length()) +
                             " exceeds ell - 2pi while the oracle finds " +
                             std::to_string(out.oracle.length()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Curvature bound

enum class BoundStatus { Pass, Fail, Vacuous, IllConditioned };

inline std::string_view to_string(BoundStatus s) {
    switch (s) {
    case BoundStatus::Pass: return "pass";
    case BoundStatus::Fail: return "fail";
    case BoundStatus::Vacuous: return "vacuous";
    case BoundStatus::IllConditioned: return "ill-conditioned";
    }
    return "unknown";
}

struct CurvatureBoundCheck {
    double max_curvature = 0.0;
    std::optional<double> bound;   // 2pi / (ell - 2pi), absent when ell - 2pi is ~0
    BoundStatus status = BoundStatus::Vacuous;
    double margin = 0.0;           // max_curvature - bound

    // witness-loop quantities (present when a witness exists)
    std::optional<double> loop_total_curvature;         // integral of |kappa| along the arc
    std::optional<double> loop_corner_angle;            // exterior turn at the closing point
    std::optional<double> loop_closed_total_curvature;  // arc part plus corner turn
    std::optional<double> loop_max_curvature;
    std::optional<double> loop_schur_product;           // max |kappa| on loop * loop length
    bool loop_ok = true;

    bool ok() const { return status != BoundStatus::Fail && loop_ok; }
};

/// Signed exterior angle at the closing point of a planar loop: the turn from
/// the incoming tangent at b to the outgoing tangent at a.
inline double corner_turn(const ArcCurve& curve, const Loop& loop) {
    const Vec2 out = curve.evaluate(loop.a).tangent;
    const Vec2 in = curve.evaluate(loop.b).tangent;
    return std::atan2(cross(in, out), dot(in, out));
}

inline CurvatureBoundCheck check_curvature_bound(const ArcCurve& curve, bool self_intersects,
                                                 const std::optional<Loop>& witness = std::nullopt) {
    const Tolerances& tol = curve.tolerances();
    CurvatureBoundCheck out;
    out.max_curvature = max_curvature(curve).value;
    const double gap = curve.ell() - kTwoPi;
    if (gap > 0.0 && gap >= tol.ill_conditioned_gap) out.bound = kTwoPi / gap;

    if (!self_intersects) {
        out.status = BoundStatus::Vacuous;
    } else if (!out.bound) {
        out.status = BoundStatus::IllConditioned;
    } else {
        out.margin = out.max_curvature - *out.bound;
        out.status = out.margin >= -tol.theorem ? BoundStatus::Pass : BoundStatus::Fail;
    }
    if (out.bound && out.status == BoundStatus::Vacuous) out.margin = out.max_curvature - *out.bound;

    if (witness) {
        const double arc = total_abs_curvature(curve, witness->a, witness->b);
        const double corner = std::abs(corner_turn(curve, *witness));
        const double kmax = max_abs_curvature_on(curve, witness->a, witness->b);
        out.loop_total_curvature = arc;
        out.loop_corner_angle = corner;
        out.loop_closed_total_curvature = arc + corner;
        out.loop_max_curvature = kmax;
        out.loop_schur_product = kmax * witness->length();
        out.loop_ok = arc + corner >= kTwoPi - tol.theorem &&
                      kmax * witness->length() >= kTwoPi * (1.0 - tol.theorem);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Proposition (c)

struct PropCCheck {
    bool applicable = false;
    std::optional<double> segment_start;
    int crossings_in_segment = 0;
    bool witness_found = false;
    std::string diagnostics;

    bool ok() const { return !applicable || witness_found; }
};

/// When theta is periodic and the curve self-intersects, sweeps windows
/// [a, a + ell] anchored at each planar crossing's first parameter and reports
/// the first window holding two distinct crossings.
inline PropCCheck verify_prop_c(const ArcCurve& curve, const std::vector<Crossing>& crossings) {
    PropCCheck out;
    const TurningDelta turn = turning_delta(curve);
    if (turn.multiple != 0 || crossings.empty()) return out;
    out.applicable = true;
    const double ell = curve.ell();
    const double eps = 1e-9 * std::max(1.0, ell);

    std::vector<Loop> planar;
    for (const Crossing& c : crossings) planar.push_back(planar_loop(curve, c));

    for (const Loop& anchor : planar) {
        if (anchor.length() > ell) continue;
        const double a = anchor.a;
        int count = 0;
        for (const Loop& l : planar) {
            if (l.length() > ell + eps) continue;
            double delta = std::fmod(a - (l.b - ell), ell);
            if (delta < 0.0) delta += ell;
            if (delta <= ell - l.length() + eps || delta >= ell - eps) ++count;
        }
        if (count > out.crossings_in_segment) {
            out.crossings_in_segment = count;
            out.segment_start = a;
        }
        if (count >= 2) {
            out.witness_found = true;
            return out;
        }
    }
    out.diagnostics = "no periodic window holds two crossings; best window has " +
                      std::to_string(out.crossings_in_segment);
    return out;
}

// ---------------------------------------------------------------------------
// Umlaufsatz

enum class CornerKind { None, Convex, Reflex };

inline std::string_view to_string(CornerKind k) {
    switch (k) {
    case CornerKind::None: return "none";
    case CornerKind::Convex: return "convex";
    case CornerKind::Reflex: return "reflex";
    }
    return "unknown";
}

struct UmlaufsatzReport {
    Loop loop;                    // planar loop between the crossing parameters
    double alpha = 0.0;           // angle between the tangents at the crossing
    double interior_angle = 0.0;  // pi - alpha: corner angle of the loop
    double arc_turning = 0.0;     // integral of theta' along the loop
    double closed_turning = 0.0;  // arc turning plus the corner's exterior turn
    CornerKind matched = CornerKind::None;
    double residual = 0.0;        // |arc_turning| minus the matched value
    double closed_residual = 0.0; // distance of closed_turning from +-2pi
};

/// Turning along the planar loop at a simple crossing. For a simple closed
/// loop with one corner, |integral of theta'| = pi + (interior angle), the
/// interior angle being pi - alpha at a convex corner or pi + alpha at a
/// reflex one; equivalently the arc turning plus the corner turn is +-2pi.
inline UmlaufsatzReport umlaufsatz_check(const ArcCurve& curve, const std::vector<Crossing>& crossings,
                                         const Crossing& crossing, double match_tolerance = 1e-4) {
    if (crossing.simplicity != Simplicity::Simple) {
        throw CurveError(ErrorCode::PreconditionViolated, "Umlaufsatz check needs a simple crossing");
    }
    UmlaufsatzReport out;
    out.loop = planar_loop(curve, crossing);
    for (const InnerPair& p : inner_pairs(curve, crossings, out.loop.a, out.loop.b)) {
        const Vec2 px = curve.point(p.x), py = curve.point(p.y);
        if (std::abs(px.x - py.x) < 0.5 * kTwoPi) {
            throw CurveError(ErrorCode::LoopNotSimple,
                             "planar loop at s=" + std::to_string(out.loop.a) + " crosses itself");
        }
    }
    out.alpha = crossing.alpha;
    out.interior_angle = std::numbers::pi - crossing.alpha;
    out.arc_turning = curve.evaluate(out.loop.b).theta - curve.evaluate(out.loop.a).theta;
    out.closed_turning = out.arc_turning + corner_turn(curve, out.loop);
    out.closed_residual = std::abs(std::abs(out.closed_turning) - kTwoPi);

    const double turning = std::abs(out.arc_turning);
    const double convex = std::numbers::pi + out.interior_angle;
    const double reflex = std::numbers::pi + (kTwoPi - out.interior_angle);
    const double rc = std::abs(turning - convex), rr = std::abs(turning - reflex);
    out.residual = std::min(rc, rr);
    if (out.residual <= match_tolerance) out.matched = rc <= rr ? CornerKind::Convex : CornerKind::Reflex;
    return out;
}

} // namespace pcurve
