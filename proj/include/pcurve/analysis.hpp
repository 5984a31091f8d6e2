#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcurve/arc_curve.hpp"
#include "pcurve/crossings.hpp"
#include "pcurve/loops.hpp"
#include "pcurve/verifiers.hpp"

namespace pcurve {

struct PropC {
    bool applicable = false;
    std::optional<double> segment_start;
    int crossings_in_segment = 0;
    bool ok = true;
};

/// Full certification record for one curve.
struct AnalysisReport {
    std::string label;
    int samples = 0;
    double ell = 0.0;
    double max_curvature = 0.0;
    std::optional<double> curvature_bound;
    int turning_multiple = 0;
    std::vector<Crossing> crossings;
    std::optional<Loop> short_loop;
    std::string short_loop_route = "none";
    std::optional<Loop> minimal_subloop;
    std::optional<Loop> winding_one_subloop;
    std::optional<double> oracle_loop_length;
    bool prop_a_ok = true;
    double prop_a_margin = 0.0;
    bool prop_b_ok = true;
    double prop_b_margin = 0.0;
    std::string prop_b_status = "vacuous";
    PropC prop_c;
    std::optional<double> loop_total_curvature;
    std::optional<double> loop_corner_angle;
    std::optional<double> loop_closed_total_curvature;
    std::optional<double> loop_max_curvature;
    std::optional<double> loop_schur_product;
    bool loop_curvature_ok = true;

    bool ok() const { return prop_a_ok && prop_b_ok && prop_c.ok && loop_curvature_ok; }
};

/// Runs every check on an already reparametrized curve. Crossings must all be
/// simple (perturb first otherwise); NotSimple is raised if they are not.
inline AnalysisReport analyze(const ArcCurve& curve) {
    AnalysisReport rep;
    rep.label = curve.spec().label;
    rep.samples = static_cast<int>(curve.samples().size());
    rep.ell = curve.ell();
    rep.turning_multiple = turning_delta(curve).multiple;
    rep.crossings = find_crossings(curve);
    const double tol = curve.tolerances().theorem;
    const double gap = curve.ell() - kTwoPi;

    const auto short_loop = locate_short_loop(curve, rep.crossings);
    std::optional<Loop> witness;
    if (short_loop) {
        witness = short_loop->witness;
        rep.short_loop = short_loop->witness;
        rep.short_loop_route = std::string(to_string(short_loop->route));
        rep.minimal_subloop = short_loop->minimal;
        rep.winding_one_subloop = short_loop->winding_one;
        rep.oracle_loop_length = short_loop->oracle.length();
        rep.prop_a_margin = gap - short_loop->witness.length();
        rep.prop_a_ok = rep.prop_a_margin >= -tol;
    } else {
        rep.prop_a_margin = gap;
    }

    const CurvatureBoundCheck cb = check_curvature_bound(curve, !rep.crossings.empty(), witness);
    rep.max_curvature = cb.max_curvature;
    rep.curvature_bound = cb.bound;
    rep.prop_b_margin = cb.margin;
    rep.prop_b_status = std::string(to_string(cb.status));
    rep.prop_b_ok = cb.status != BoundStatus::Fail;
    rep.loop_total_curvature = cb.loop_total_curvature;
    rep.loop_corner_angle = cb.loop_corner_angle;
    rep.loop_closed_total_curvature = cb.loop_closed_total_curvature;
    rep.loop_max_curvature = cb.loop_max_curvature;
    rep.loop_schur_product = cb.loop_schur_product;
    rep.loop_curvature_ok = cb.loop_ok;

    const PropCCheck pc = verify_prop_c(curve, rep.crossings);
    rep.prop_c = {pc.applicable, pc.segment_start, pc.crossings_in_segment, pc.ok()};
    return rep;
}

} // namespace pcurve
