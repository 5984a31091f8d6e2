#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pcurve/arc_curve.hpp"
#include "pcurve/crossings.hpp"
#include "pcurve/curve_spec.hpp"
#include "pcurve/error.hpp"

namespace pcurve {

/// Minimum raw speed accepted for generated curves; slower curves carry
/// curvature spikes the default sampling cannot resolve.
inline constexpr double kGeneratorSpeedFloor = 0.2;

/// Seeded random Fourier curve, coefficients amplitude * U(-1, 1) / k^2,
/// redrawn until the curve is regular with speed above kGeneratorSpeedFloor.
inline CurveSpec random_curve(std::uint64_t seed, int harmonics, double amplitude, int max_tries = 1000) {
    if (harmonics < 1) throw CurveError(ErrorCode::PreconditionViolated, "harmonics must be >= 1");
    if (!(amplitude > 0.0)) throw CurveError(ErrorCode::PreconditionViolated, "amplitude must be > 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        CurveSpec spec;
        spec.label = "random-" + std::to_string(seed);
        for (auto* list : {&spec.x_cos, &spec.x_sin, &spec.y_cos, &spec.y_sin}) list->resize(harmonics);
        for (int k = 1; k <= harmonics; ++k) {
            const double scale = amplitude / (static_cast<double>(k) * k);
            spec.x_cos[k - 1] = scale * unit(rng);
            spec.x_sin[k - 1] = scale * unit(rng);
            spec.y_cos[k - 1] = scale * unit(rng);
            spec.y_sin[k - 1] = scale * unit(rng);
        }
        try {
            build_curve(spec, kGeneratorSpeedFloor);
            return spec;
        } catch (const CurveError& e) {
            if (e.code() != ErrorCode::NonRegular) throw;
        }
    }
    throw CurveError(ErrorCode::GenerationFailed,
                     "no regular curve after " + std::to_string(max_tries) + " draws for seed " +
                         std::to_string(seed));
}

/// Seeded curve whose first harmonic makes x retreat by more than a period,
///   x = t + a sin(t + ph) + jitter,  y = c cos(t + ph) + jitter,
/// a in [5, 7.5]. Such curves carry crossings of winding -1 and hence cylinder
/// loops of winding 2; random_curve at moderate amplitude almost never does.
inline CurveSpec random_backtracking_curve(std::uint64_t seed, int max_tries = 1000) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        const double a = 5.0 + 2.5 * u01(rng), c = 2.5 + u01(rng), ph = kTwoPi * u01(rng);
        CurveSpec spec;
        spec.label = "backtrack-" + std::to_string(seed);
        for (auto* list : {&spec.x_cos, &spec.x_sin, &spec.y_cos, &spec.y_sin}) list->resize(3);
        spec.x_cos[0] = a * std::sin(ph);
        spec.x_sin[0] = a * std::cos(ph);
        spec.y_cos[0] = c * std::cos(ph);
        spec.y_sin[0] = -c * std::sin(ph);
        for (int k = 2; k <= 3; ++k) {
            const double scale = 0.3 / (static_cast<double>(k) * k);
            spec.x_cos[k - 1] = scale * unit(rng);
            spec.x_sin[k - 1] = scale * unit(rng);
            spec.y_cos[k - 1] = scale * unit(rng);
            spec.y_sin[k - 1] = scale * unit(rng);
        }
        try {
            build_curve(spec, kGeneratorSpeedFloor);
            return spec;
        } catch (const CurveError& e) {
            if (e.code() != ErrorCode::NonRegular) throw;
        }
    }
    throw CurveError(ErrorCode::GenerationFailed, "no regular backtracking curve for seed " + std::to_string(seed));
}

struct PerturbResult {
    CurveSpec spec;
    double magnitude = 0.0;  // sup-norm bound of the added jitter, per coordinate
    int attempts = 0;
    std::vector<Crossing> crossings;
};

/// Sup-norm bound of the coordinate-wise difference between two specs.
inline double spec_distance(const CurveSpec& a, const CurveSpec& b) {
    auto diff = [](const std::vector<double>& p, const std::vector<double>& q) {
        double sum = 0.0;
        const std::size_t n = std::max(p.size(), q.size());
        for (std::size_t i = 0; i < n; ++i) sum += std::abs(detail::coef(p, i) - detail::coef(q, i));
        return sum;
    };
    const double dx = diff(a.x_cos, b.x_cos) + diff(a.x_sin, b.x_sin);
    const double dy = std::abs(a.y_const - b.y_const) + diff(a.y_cos, b.y_cos) + diff(a.y_sin, b.y_sin);
    return std::max(dx, dy);
}

/// Adds seeded Fourier jitter of sup-norm at most `magnitude` until every
/// crossing classifies Simple. Magnitude 0 only accepts an input that is
/// already in general position.
inline PerturbResult perturb_to_general_position(const CurveSpec& spec, double magnitude, std::uint64_t seed,
                                                 int n_samples = kDefaultSamples,
                                                 const Tolerances& tol = default_tolerances(),
                                                 int max_retries = 25) {
    if (!(magnitude >= 0.0)) throw CurveError(ErrorCode::PreconditionViolated, "magnitude must be >= 0");
    build_curve(spec, tol.regularity_floor);

    auto general = [&](const CurveSpec& s, std::vector<Crossing>& out) {
        try {
            const ArcCurve curve = reparametrize_arclength(s, n_samples, tol);
            out = find_crossings(curve);
            return all_simple(out);
        } catch (const CurveError&) {
            return false;
        }
    };

    PerturbResult result;
    if (magnitude == 0.0) {
        result.spec = spec;
        result.attempts = 1;
        if (!general(spec, result.crossings)) {
            throw CurveError(ErrorCode::GeneralPositionFailed, "curve is not in general position");
        }
        return result;
    }

    const int harmonics = static_cast<int>(std::max<std::size_t>(spec.harmonics(), 4));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int attempt = 1; attempt <= max_retries; ++attempt) {
        std::vector<double> jx(2 * harmonics), jy(2 * harmonics);
        double sx = 0.0, sy = 0.0;
        for (auto& c : jx) { c = unit(rng); sx += std::abs(c); }
        for (auto& c : jy) { c = unit(rng); sy += std::abs(c); }
        CurveSpec out = spec;
        out.label = spec.label + "+jitter";
        for (auto* list : {&out.x_cos, &out.x_sin, &out.y_cos, &out.y_sin})
            if (list->size() < static_cast<std::size_t>(harmonics)) list->resize(harmonics, 0.0);
        for (int k = 0; k < harmonics; ++k) {
            out.x_cos[k] += magnitude * jx[2 * k] / sx;
            out.x_sin[k] += magnitude * jx[2 * k + 1] / sx;
            out.y_cos[k] += magnitude * jy[2 * k] / sy;
            out.y_sin[k] += magnitude * jy[2 * k + 1] / sy;
        }
        std::vector<Crossing> crossings;
        bool regular = true;
        try {
            build_curve(out, tol.regularity_floor);
        } catch (const CurveError&) {
            regular = false;
        }
        if (regular && general(out, crossings)) {
            result.spec = std::move(out);
            result.magnitude = spec_distance(spec, result.spec);
            result.attempts = attempt;
            result.crossings = std::move(crossings);
            return result;
        }
    }
    throw CurveError(ErrorCode::GeneralPositionFailed,
                     "no general-position perturbation in " + std::to_string(max_retries) + " tries");
}

} // namespace pcurve
