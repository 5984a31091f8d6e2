#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "pcurve/curve_spec.hpp"
#include "pcurve/error.hpp"
#include "pcurve/gauss_legendre.hpp"

namespace pcurve {

/// Curvature profile on [0, S]:
///   kappa(s) = c0 + sum_k a_k cos(k pi s / S) + b_k sin(k pi s / S)
struct CurvatureProfile {
    double c0 = 0.0;
    std::vector<double> cos_terms;
    std::vector<double> sin_terms;

    double operator()(double s, double length) const {
        double value = c0;
        for (std::size_t i = 0; i < std::max(cos_terms.size(), sin_terms.size()); ++i) {
            const double w = static_cast<double>(i + 1) * std::numbers::pi * s / length;
            value += detail::coef(cos_terms, i) * std::cos(w) + detail::coef(sin_terms, i) * std::sin(w);
        }
        return value;
    }
};

using CurvatureFn = std::function<double(double)>;

struct SchurReport {
    double length = 0.0;
    std::vector<double> s;
    std::vector<double> chord1;  // |v1(s) - v1(0)|, the convex comparison arc
    std::vector<double> chord2;
    std::vector<double> margin;  // chord2 - chord1
    double min_margin = 0.0;
    bool ok = true;
};

namespace detail {

// Unit-speed arc with the given curvature, positions at s_i = i * S / grid.
inline std::vector<Vec2> integrate_arc(const CurvatureFn& kappa, double length, int grid, int sub = 8) {
    const auto& rule = gauss16();
    const int panels = grid * sub;
    const double w = length / panels;
    std::vector<Vec2> out(static_cast<std::size_t>(grid) + 1, Vec2{});
    Vec2 pos{};
    double theta = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = p * w, hi = lo + w;
        auto angle = [&](double s) { return theta + rule.integrate(kappa, lo, s); };
        pos.x += rule.integrate([&](double s) { return std::cos(angle(s)); }, lo, hi);
        pos.y += rule.integrate([&](double s) { return std::sin(angle(s)); }, lo, hi);
        theta += rule.integrate(kappa, lo, hi);
        if ((p + 1) % sub == 0) out[static_cast<std::size_t>((p + 1) / sub)] = pos;
    }
    return out;
}

} // namespace detail

/// Chord comparison for two unit-speed arcs of equal length S given by their
/// curvatures. Requires kappa1 >= 0 with total turn <= pi (the arc and its
/// chord bound a convex region) and |kappa2| <= kappa1 pointwise; then the
/// chord of arc 2 dominates the chord of arc 1 at every s.
inline SchurReport schur_chord_compare(const CurvatureFn& kappa1, const CurvatureFn& kappa2, double length,
                                       int grid = 64, double check_tolerance = 1e-8) {
    if (!(length > 0.0) || grid < 1) throw CurveError(ErrorCode::PreconditionViolated, "need S > 0, grid >= 1");
    constexpr int kChecks = 4096;
    constexpr double slack = 1e-12;
    for (int i = 0; i <= kChecks; ++i) {
        const double s = length * i / kChecks;
        const double k1 = kappa1(s), k2 = kappa2(s);
        if (k1 < -slack) {
            throw CurveError(ErrorCode::HypothesisViolated, "kappa1 < 0 at s=" + std::to_string(s));
        }
        if (std::abs(k2) > k1 + slack) {
            throw CurveError(ErrorCode::HypothesisViolated, "|kappa2| > kappa1 at s=" + std::to_string(s));
        }
    }
    double turn = 0.0;
    for (int p = 0; p < 256; ++p)
        turn += detail::gauss16().integrate(kappa1, length * p / 256, length * (p + 1) / 256);
    if (turn > std::numbers::pi + 1e-12) {
        throw CurveError(ErrorCode::HypothesisViolated,
                         "kappa1 turns by " + std::to_string(turn) + " > pi; arc not convex with its chord");
    }

    const auto arc1 = detail::integrate_arc(kappa1, length, grid);
    const auto arc2 = detail::integrate_arc(kappa2, length, grid);
    SchurReport rep;
    rep.length = length;
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= grid; ++i) {
        const double c1 = norm(arc1[i]), c2 = norm(arc2[i]);
        rep.s.push_back(length * i / grid);
        rep.chord1.push_back(c1);
        rep.chord2.push_back(c2);
        rep.margin.push_back(c2 - c1);
        rep.min_margin = std::min(rep.min_margin, c2 - c1);
    }
    rep.ok = rep.min_margin >= -check_tolerance;
    return rep;
}

inline SchurReport schur_chord_compare(const CurvatureProfile& kappa1, const CurvatureProfile& kappa2,
                                       double length, int grid = 64, double check_tolerance = 1e-8) {
    return schur_chord_compare([&](double s) { return kappa1(s, length); },
                               [&](double s) { return kappa2(s, length); }, length, grid, check_tolerance);
}

struct SchurPair {
    double length = 0.0;
    CurvatureFn kappa1;
    CurvatureFn kappa2;
};

/// Random admissible pair: kappa1 positive with total turn <= pi, kappa2 a
/// modulated copy bounded by kappa1 in absolute value.
inline SchurPair random_schur_pair(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double length = 0.5 + 3.0 * u01(rng);
    const double a = 0.9 * u01(rng), b = 0.9 * u01(rng) * (1.0 - a);
    const double f1 = 1.0 + 3.0 * u01(rng), ph = kTwoPi * u01(rng);
    const double turn = std::numbers::pi * (0.05 + 0.95 * u01(rng));
    // shape(s) in [1 - a - b, 1 + a + b], positive; rescaled to the drawn turn
    auto shape = [=](double s) { return 1.0 + a * std::cos(f1 * s + ph) + b * std::sin(2.0 * s); };
    double total = 0.0;
    for (int p = 0; p < 256; ++p)
        total += detail::gauss16().integrate(shape, length * p / 256, length * (p + 1) / 256);
    const double scale = turn / total;
    const double rho = u01(rng), w = 6.0 * u01(rng), phase = kTwoPi * u01(rng);
    SchurPair pair;
    pair.length = length;
    pair.kappa1 = [=](double s) { return scale * shape(s); };
    pair.kappa2 = [=](double s) { return scale * shape(s) * rho * std::cos(w * s + phase); };
    return pair;
}

} // namespace pcurve
