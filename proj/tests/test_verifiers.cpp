#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"

using namespace pcurve;
using namespace testing_support;

namespace {

constexpr double kPi = std::numbers::pi;

double prolate_loop_length_oracle(double a) {
    const double ts = bisect([a](double t) { return t - a * std::sin(t); }, 1e-3, kPi);
    return simpson([&](double t) { return speed_oracle(prolate(a), t); }, -ts, ts);
}

struct Analyzed {
    ArcCurve curve;
    std::vector<Crossing> crossings;
};

Analyzed load(const CurveSpec& s) {
    ArcCurve c = reparametrize_arclength(s);
    auto cr = find_crossings(c);
    return {std::move(c), std::move(cr)};
}

} // namespace

TEST(ShortLoop, StraightLineAbsent) {
    const auto a = load(straight_line());
    EXPECT_FALSE(locate_short_loop(a.curve, a.crossings).has_value());
}

TEST(ShortLoop, Prolate) {
    const auto a = load(prolate(1.5));
    const auto sl = locate_short_loop(a.curve, a.crossings);
    ASSERT_TRUE(sl.has_value());
    EXPECT_EQ(sl->route, ShortLoopRoute::WindingOneTranslate);
    EXPECT_NEAR(sl->witness.length(), prolate_loop_length_oracle(1.5), 1e-9);
    EXPECT_NEAR(sl->witness.length(), 3.1335487815351404, 1e-9);
    EXPECT_LE(sl->witness.length(), a.curve.ell() - kTwoPi);
    EXPECT_NEAR(sl->oracle.length(), sl->witness.length(), 1e-12);
}

TEST(ShortLoop, NearDegenerateProlate) {
    const auto a = load(prolate(1.05));
    const auto sl = locate_short_loop(a.curve, a.crossings);
    ASSERT_TRUE(sl.has_value());
    EXPECT_NEAR(sl->witness.length(), prolate_loop_length_oracle(1.05), 1e-9);
}

TEST(ShortLoop, Remark1WindingZeroRoute) {
    const auto a = load(fixture("remark1.json"));
    ASSERT_EQ(a.crossings.size(), 1u);
    EXPECT_EQ(a.crossings[0].winding, 0);
    EXPECT_EQ(turning_delta(a.curve).multiple, 1);
    const auto sl = locate_short_loop(a.curve, a.crossings);
    ASSERT_TRUE(sl.has_value());
    EXPECT_EQ(sl->route, ShortLoopRoute::WindingZero);
}

TEST(ShortLoop, Remark3ComplementRoute) {
    const auto a = load(fixture("remark3.json"));
    const auto sl = locate_short_loop(a.curve, a.crossings);
    ASSERT_TRUE(sl.has_value());
    EXPECT_EQ(sl->route, ShortLoopRoute::WindingMinusOneComplement);
    EXPECT_EQ(sl->minimal.winding, -1);
    ASSERT_TRUE(sl->winding_one.has_value());
    EXPECT_EQ(sl->winding_one->winding, 1);
    EXPECT_LE(sl->witness.length(), a.curve.ell() - kTwoPi + 1e-6);
    EXPECT_LE(sl->oracle.length(), sl->witness.length() + 1e-12);
    const Vec2 d = a.curve.point(sl->witness.a) - a.curve.point(sl->witness.b);
    EXPECT_LT(norm(d), 10 * a.curve.closure_tolerance());
}

TEST(ShortLoop, OracleNeverLonger) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto a = load(seed % 3 ? random_curve(seed, 6, 2.0) : random_backtracking_curve(seed));
        if (!all_simple(a.crossings)) continue;
        const auto sl = locate_short_loop(a.curve, a.crossings);
        if (!sl) continue;
        const double bound = a.curve.ell() - kTwoPi + 1e-6;
        EXPECT_LE(sl->witness.length(), bound) << "seed " << seed;
        EXPECT_LE(sl->oracle.length(), bound) << "seed " << seed;
        EXPECT_LE(sl->oracle.length(), sl->witness.length() + 1e-12) << "seed " << seed;
    }
}

TEST(CurvatureBound, Prolate) {
    const auto a = load(prolate(1.5));
    const auto sl = locate_short_loop(a.curve, a.crossings);
    const auto cb = check_curvature_bound(a.curve, true, sl->witness);
    ASSERT_TRUE(cb.bound.has_value());
    const double ell = ell_oracle(prolate(1.5));
    EXPECT_NEAR(*cb.bound, kTwoPi / (ell - kTwoPi), 1e-9);
    EXPECT_NEAR(*cb.bound, 1.4882586, 1e-6);
    EXPECT_NEAR(cb.max_curvature, 6.0, 1e-9);
    EXPECT_EQ(cb.status, BoundStatus::Pass);
    EXPECT_GT(cb.margin, 0.0);
    // arc part alone is 2pi - alpha; the corner supplies the rest
    EXPECT_NEAR(*cb.loop_total_curvature, kTwoPi - a.crossings[0].alpha, 1e-8);
    EXPECT_NEAR(*cb.loop_closed_total_curvature, kTwoPi, 1e-8);
    EXPECT_GE(*cb.loop_schur_product, kTwoPi);
    EXPECT_TRUE(cb.ok());
}

TEST(CurvatureBound, NearDegenerateProlatePasses) {
    const auto a = load(prolate(1.05));
    const auto sl = locate_short_loop(a.curve, a.crossings);
    const auto cb = check_curvature_bound(a.curve, true, sl->witness);
    EXPECT_EQ(cb.status, BoundStatus::Pass);
    EXPECT_GT(cb.margin, 0.0);
    EXPECT_TRUE(cb.loop_ok);
}

TEST(CurvatureBound, StraightLineVacuous) {
    const auto a = load(straight_line());
    const auto cb = check_curvature_bound(a.curve, false);
    EXPECT_EQ(cb.status, BoundStatus::Vacuous);
    EXPECT_FALSE(cb.bound.has_value());
    EXPECT_TRUE(cb.ok());
}

TEST(CurvatureBound, IllConditionedGap) {
    CurveSpec s;
    s.y_sin = {0.01};  // ell - 2pi ~ 1.6e-4
    const auto a = load(s);
    ASSERT_LT(a.curve.ell() - kTwoPi, 1e-3);
    const auto cb = check_curvature_bound(a.curve, true);
    EXPECT_EQ(cb.status, BoundStatus::IllConditioned);
    EXPECT_TRUE(cb.ok());
}

TEST(CurvatureBound, TotalCurvatureAgainstQuadrature) {
    const CurveSpec s = random_curve(9, 6, 2.0);
    const ArcCurve c = reparametrize_arclength(s);
    const double lib = total_abs_curvature(c, 0.0, c.ell());
    const double ref = simpson(
        [&](double t) {
            const RawJet j = raw_jet(s, t);
            return std::abs(cross(j.d1, j.d2)) / dot(j.d1, j.d1);
        },
        0.0, 2 * kPi, 1e-14);
    EXPECT_NEAR(lib, ref, 1e-9);
}

TEST(PeriodicWindow, NotApplicableCases) {
    for (const CurveSpec& s : {prolate(1.5), straight_line()}) {
        const auto a = load(s);
        const auto pc = verify_prop_c(a.curve, a.crossings);
        EXPECT_FALSE(pc.applicable);
        EXPECT_TRUE(pc.ok());
    }
}

TEST(PeriodicWindow, Remark2HasTwoCrossings) {
    const auto a = load(fixture("remark2.json"));
    EXPECT_EQ(turning_delta(a.curve).multiple, 0);
    ASSERT_EQ(a.crossings.size(), 2u);
    const auto pc = verify_prop_c(a.curve, a.crossings);
    EXPECT_TRUE(pc.applicable);
    EXPECT_TRUE(pc.witness_found);
    EXPECT_GE(pc.crossings_in_segment, 2);
    ASSERT_TRUE(pc.segment_start.has_value());
    // both planar pairs really lie in [a, a + ell] for some translate
    const double lo = *pc.segment_start, hi = lo + a.curve.ell();
    int inside = 0;
    for (const Crossing& x : a.crossings) {
        const Loop l = planar_loop(a.curve, x);
        for (int k = -2; k <= 2; ++k) {
            const double s = l.a + k * a.curve.ell(), t = l.b + k * a.curve.ell();
            if (s >= lo - 1e-9 && t <= hi + 1e-9) {
                ++inside;
                break;
            }
        }
    }
    EXPECT_GE(inside, 2);
}

TEST(PeriodicWindow, RandomTurningZeroCurves) {
    int applicable = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const auto a = load(random_curve(seed, 6, 2.0));
        if (!all_simple(a.crossings)) continue;
        const auto pc = verify_prop_c(a.curve, a.crossings);
        if (pc.applicable) ++applicable;
        EXPECT_TRUE(pc.ok()) << "seed " << seed << ": " << pc.diagnostics;
    }
    EXPECT_GT(applicable, 0);
}

TEST(TurningIdentity, ProlateConvexCorner) {
    const auto a = load(prolate(1.5));
    const auto u = umlaufsatz_check(a.curve, a.crossings, a.crossings[0]);
    EXPECT_EQ(u.matched, CornerKind::Convex);
    EXPECT_LT(u.residual, 1e-4);
    EXPECT_NEAR(std::abs(u.arc_turning), kPi + u.interior_angle, 1e-8);
    // independent: theta(t*) - theta(-t*) from the analytic tangent
    const double ts = 1.4957815682220996;
    const double th = std::atan2(-1.5 * std::sin(ts), 1 - 1.5 * std::cos(ts));
    EXPECT_NEAR(std::abs(u.arc_turning), kTwoPi - 2 * std::abs(th), 1e-8);
    EXPECT_LT(u.closed_residual, 1e-6);
}

TEST(TurningIdentity, RightAngle) {
    const auto a = load(fixture("rightangle.json"));
    const auto u = umlaufsatz_check(a.curve, a.crossings, a.crossings[0]);
    EXPECT_NEAR(std::abs(u.arc_turning), 3 * kPi / 2, 1e-4);
    EXPECT_NE(u.matched, CornerKind::None);
    EXPECT_LT(u.closed_residual, 1e-6);
}

TEST(TurningIdentity, RejectsNonSimpleLoop) {
    // seed 3 draws nested planar loops; crossings of a translate do not count
    const auto a = load(random_curve(3, 6, 2.0));
    ASSERT_TRUE(all_simple(a.crossings));
    int rejected = 0;
    for (const Crossing& x : a.crossings) {
        try {
            umlaufsatz_check(a.curve, a.crossings, x);
        } catch (const CurveError& e) {
            EXPECT_EQ(e.code(), ErrorCode::LoopNotSimple);
            ++rejected;
        }
    }
    EXPECT_GT(rejected, 0);
    const auto b = load(fixture("remark3.json"));
    for (const Crossing& x : b.crossings) EXPECT_NO_THROW(umlaufsatz_check(b.curve, b.crossings, x));
}

TEST(Schur, IdenticalHalfCircles) {
    const auto r = schur_chord_compare(CurvatureProfile{1.0, {}, {}}, CurvatureProfile{1.0, {}, {}}, kPi);
    EXPECT_TRUE(r.ok);
    for (double m : r.margin) EXPECT_NEAR(m, 0.0, 1e-12);
}

TEST(Schur, HalfCircleAgainstSegment) {
    const auto r = schur_chord_compare(CurvatureProfile{1.0, {}, {}}, CurvatureProfile{0.0, {}, {}}, kPi, 64);
    ASSERT_EQ(r.s.size(), 64u);
    for (std::size_t i = 0; i < r.s.size(); ++i) {
        EXPECT_NEAR(r.chord1[i], 2 * std::sin(r.s[i] / 2), 1e-9);
        EXPECT_NEAR(r.chord2[i], r.s[i], 1e-9);
        EXPECT_GT(r.margin[i], 0.0);
    }
}

TEST(Schur, SineProfile) {
    const auto r = schur_chord_compare(CurvatureProfile{1.0, {}, {}}, CurvatureProfile{0.0, {}, {0.0, 1.0}}, kPi);
    EXPECT_TRUE(r.ok);
    EXPECT_GE(r.min_margin, -1e-8);
}

TEST(Schur, HypothesisChecks) {
    auto expect_violation = [](const CurvatureProfile& k1, const CurvatureProfile& k2, double len) {
        try {
            schur_chord_compare(k1, k2, len);
            FAIL();
        } catch (const CurveError& e) {
            EXPECT_EQ(e.code(), ErrorCode::HypothesisViolated);
        }
    };
    expect_violation({1.0, {}, {}}, {0.0, {}, {1.5}}, kPi);      // |kappa2| > kappa1
    expect_violation({0.0, {}, {0.0, 0.5}}, {0.0, {}, {}}, kPi);  // kappa1 < 0 on the second half
    expect_violation({1.0, {}, {}}, {0.0, {}, {}}, 4.0);        // turns by more than pi
}

TEST(Schur, RandomAdmissiblePairs) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const SchurPair p = random_schur_pair(seed);
        const auto r = schur_chord_compare(p.kappa1, p.kappa2, p.length);
        EXPECT_GE(r.min_margin, -1e-8) << "seed " << seed;
    }
}

TEST(Generators, RandomCurveContract) {
    try {
        random_curve(0, 0, 1.0);
        FAIL();
    } catch (const CurveError& e) {
        EXPECT_EQ(e.code(), ErrorCode::PreconditionViolated);
    }
    EXPECT_TRUE(random_curve(5, 6, 2.0) == random_curve(5, 6, 2.0));
    EXPECT_FALSE(random_curve(5, 6, 2.0) == random_curve(6, 6, 2.0));
    EXPECT_GE(build_curve(random_curve(5, 6, 2.0)).min_speed, kGeneratorSpeedFloor);
}

TEST(Generators, SmallAmplitudeCrossingFree) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
        EXPECT_TRUE(find_crossings(reparametrize_arclength(random_curve(seed, 4, 0.01))).empty());
}

TEST(Perturb, MagnitudeZeroKeepsGeneralCurve) {
    const CurveSpec s = prolate(1.5);
    const auto r = perturb_to_general_position(s, 0.0, 1);
    EXPECT_TRUE(r.spec == s);
    EXPECT_EQ(r.magnitude, 0.0);
}

TEST(Perturb, MagnitudeZeroRejectsTangency) {
    try {
        perturb_to_general_position(fixture("tangent.json"), 0.0, 1);
        FAIL();
    } catch (const CurveError& e) {
        EXPECT_EQ(e.code(), ErrorCode::GeneralPositionFailed);
    }
}

TEST(Perturb, TangencyResolves) {
    const CurveSpec s = fixture("tangent.json");
    for (std::uint64_t seed : {7u, 1u, 2u, 3u}) {
        const auto r = perturb_to_general_position(s, 1e-4, seed);
        EXPECT_LE(r.magnitude, 1e-4 * (1 + 1e-9));
        EXPECT_TRUE(all_simple(r.crossings));
        // the fixture's own loop crossing survives; the tangency gives 0 or 2
        const std::size_t extra = r.crossings.size() - 1;
        EXPECT_TRUE(extra == 0 || extra == 2) << "seed " << seed << ": " << r.crossings.size();
        const auto again = perturb_to_general_position(s, 1e-4, seed);
        EXPECT_TRUE(again.spec == r.spec);
    }
}

TEST(Perturb, StraightLineStaysFree) {
    for (double m : {1e-3, 1e-2, 0.1}) {
        const auto r = perturb_to_general_position(straight_line(), m, 3);
        EXPECT_TRUE(r.crossings.empty());
        EXPECT_LE(r.magnitude, m * (1 + 1e-9));
    }
}

TEST(Battery, RandomCurvesSatisfyBounds) {
    int self = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        CurveSpec s = random_curve(seed, 6, 2.0);
        auto a = load(s);
        if (!all_simple(a.crossings)) a = load(perturb_to_general_position(s, 1e-4, seed).spec);
        const AnalysisReport r = analyze(a.curve);
        if (r.crossings.empty()) {
            EXPECT_FALSE(r.short_loop.has_value());
            EXPECT_TRUE(r.prop_a_ok && r.prop_b_ok);
            continue;
        }
        ++self;
        ASSERT_TRUE(r.short_loop.has_value());
        EXPECT_LE(r.short_loop->length(), r.ell - kTwoPi + 1e-6) << "seed " << seed;
        if (r.curvature_bound) EXPECT_GE(r.max_curvature, *r.curvature_bound - 1e-6) << "seed " << seed;
        EXPECT_GE(*r.loop_closed_total_curvature, kTwoPi - 1e-6) << "seed " << seed;
        EXPECT_TRUE(r.ok()) << "seed " << seed;
    }
    EXPECT_GT(self, 0);
}

TEST(Battery, ScaleCoherence) {
    for (const CurveSpec& s : {prolate(1.5), fixture("remark3.json"), random_curve(2, 6, 2.0)}) {
        const AnalysisReport a = analyze(reparametrize_arclength(s, 4096));
        const AnalysisReport b = analyze(reparametrize_arclength(s, 8192));
        EXPECT_NEAR(a.ell, b.ell, 1e-6 * a.ell);
        EXPECT_NEAR(a.max_curvature, b.max_curvature, 1e-6 * a.max_curvature);
        ASSERT_EQ(a.crossings.size(), b.crossings.size());
        if (a.short_loop) EXPECT_NEAR(a.short_loop->length(), b.short_loop->length(), 1e-6 * a.ell);
    }
}
