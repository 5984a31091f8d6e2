#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pcurve/curve_spec.hpp"
#include "pcurve/error.hpp"
#include "pcurve/gauss_legendre.hpp"
#include "pcurve/tolerances.hpp"

namespace pcurve {

inline constexpr int kDefaultSamples = 4096;
inline constexpr int kMinSamples = 256;

struct ArcSample {
    double s = 0.0;
    double t = 0.0;
    double u = 0.0;
    double v = 0.0;
    double theta = 0.0;
    double kappa = 0.0;
};

/// Pointwise geometry at an arc-length parameter.
struct CurvePoint {
    Vec2 point;
    Vec2 tangent;
    double theta = 0.0;
    double kappa = 0.0;
    double t = 0.0;
};

namespace detail {
inline double wrap_angle(double a) {
    a = std::remainder(a, kTwoPi);
    return a;
}
} // namespace detail

/// Arc-length parametrized curve. Immutable once built; all queries are
/// const and safe for concurrent readers.
class ArcCurve {
public:
    const CurveSpec& spec() const { return spec_; }
    const Tolerances& tolerances() const { return tol_; }
    double ell() const { return ell_; }
    double theta_turn() const { return theta_turn_; }
    double spacing() const { return ell_ / static_cast<double>(samples_.size()); }
    std::span<const ArcSample> samples() const { return samples_; }
    double closure_tolerance() const { return tol_.closure_for(ell_); }

    /// Arc length from t = 0 to t, for t anywhere on the real line.
    double s_of_t(double t) const {
        const double k = std::floor(t / kTwoPi);
        double r = t - k * kTwoPi;
        if (r >= kTwoPi) r -= kTwoPi;
        const double width = kTwoPi / static_cast<double>(panel_s_.size() - 1);
        std::size_t i = std::min(static_cast<std::size_t>(r / width), panel_s_.size() - 2);
        const double t0 = static_cast<double>(i) * width;
        const double partial =
            detail::gauss16().integrate([this](double x) { return raw_speed(spec_, x); }, t0, r);
        return k * ell_ + panel_s_[i] + partial;
    }

    /// Raw parameter for arc length s (any real s).
    double t_of_s(double s) const {
        auto [r, k] = reduce(s);
        return t_of_reduced(r) + kTwoPi * static_cast<double>(k);
    }

    /// Splits s into r in [0, ell) and the period index k with s = r + k*ell.
    std::pair<double, long> reduce(double s) const {
        long k = static_cast<long>(std::floor(s / ell_));
        double r = s - static_cast<double>(k) * ell_;
        if (r >= ell_) {
            r -= ell_;
            ++k;
        } else if (r < 0.0) {
            r += ell_;
            --k;
        }
        return {r, k};
    }

    CurvePoint evaluate(double s) const {
        auto [r, k] = reduce(s);
        const double t = t_of_reduced(r);
        const RawJet jet = raw_jet(spec_, t);
        const double sp = jet.speed();
        CurvePoint out;
        out.t = t + kTwoPi * static_cast<double>(k);
        out.point = {jet.p.x + kTwoPi * static_cast<double>(k), jet.p.y};
        out.tangent = {jet.d1.x / sp, jet.d1.y / sp};
        out.kappa = jet.signed_curvature();
        const std::size_t j = sample_index(r);
        const double raw_angle = std::atan2(jet.d1.y, jet.d1.x);
        out.theta = samples_[j].theta + detail::wrap_angle(raw_angle - samples_[j].theta) +
                    theta_turn_ * static_cast<double>(k);
        return out;
    }

    Vec2 point(double s) const { return evaluate(s).point; }

    std::size_t sample_index(double r) const {
        const double h = spacing();
        auto j = static_cast<std::size_t>(r / h);
        return std::min(j, samples_.size() - 1);
    }

private:
    friend ArcCurve reparametrize_arclength(const CurveSpec&, int, const Tolerances&);

    double t_of_reduced(double r) const {
        const std::size_t j = sample_index(r);
        const double t_lo = samples_[j].t;
        const double t_hi = j + 1 < samples_.size() ? samples_[j + 1].t : kTwoPi;
        const double s_lo = samples_[j].s;
        const double s_hi = j + 1 < samples_.size() ? samples_[j + 1].s : ell_;
        return invert(r, t_lo, t_hi, s_lo, s_hi);
    }

    // Newton on s(t) = target, safeguarded by the bracket [t_lo, t_hi].
    double invert(double target, double t_lo, double t_hi, double s_lo, double s_hi) const {
        double t = s_hi > s_lo ? t_lo + (t_hi - t_lo) * (target - s_lo) / (s_hi - s_lo) : t_lo;
        for (int it = 0; it < 60; ++it) {
            const double f = s_of_t(t) - target;
            if (f == 0.0) break;
            if (f > 0.0) t_hi = std::min(t_hi, t);
            else t_lo = std::max(t_lo, t);
            double next = t - f / raw_speed(spec_, t);
            if (!(next >= t_lo && next <= t_hi)) next = 0.5 * (t_lo + t_hi);
            const double step = std::abs(next - t);
            t = next;
            if (step < 1e-15 * (1.0 + std::abs(t))) break;
        }
        return t;
    }

    CurveSpec spec_;
    Tolerances tol_;
    double ell_ = 0.0;
    double theta_turn_ = 0.0;
    std::vector<double> panel_s_;   // cumulative arc length at uniform t-panel boundaries
    std::vector<ArcSample> samples_;
};

/// Converts the raw Fourier parametrization to arc length and resamples on a
/// uniform s-grid of n_samples points per period.
inline ArcCurve reparametrize_arclength(const CurveSpec& spec, int n_samples = kDefaultSamples,
                                        const Tolerances& tol = default_tolerances()) {
    if (n_samples < kMinSamples) {
        throw CurveError(ErrorCode::PreconditionViolated,
                         "n_samples must be at least " + std::to_string(kMinSamples));
    }
    build_curve(spec, tol.regularity_floor);

    const auto& rule = detail::gauss16();
    auto speed = [&spec](double t) { return raw_speed(spec, t); };
    auto total = [&](int panels) {
        double sum = 0.0;
        const double w = kTwoPi / panels;
        for (int i = 0; i < panels; ++i) sum += rule.integrate(speed, i * w, (i + 1) * w);
        return sum;
    };

    int panels = 64;
    double ell = total(panels);
    for (;;) {
        const double refined = total(2 * panels);
        panels *= 2;
        if (std::abs(refined - ell) <= 1e-14 * refined) {
            ell = refined;
            break;
        }
        ell = refined;
        if (panels > (1 << 16)) {
            throw CurveError(ErrorCode::QuadratureFailure,
                             "arc length of '" + spec.label + "' did not converge");
        }
    }
    panels = std::max(panels, n_samples / 8);

    ArcCurve curve;
    curve.spec_ = spec;
    curve.tol_ = tol;
    curve.panel_s_.assign(static_cast<std::size_t>(panels) + 1, 0.0);
    const double w = kTwoPi / panels;
    for (int i = 0; i < panels; ++i) {
        curve.panel_s_[i + 1] = curve.panel_s_[i] + rule.integrate(speed, i * w, (i + 1) * w);
    }
    curve.ell_ = curve.panel_s_.back();
    ell = curve.ell_;

    const auto n = static_cast<std::size_t>(n_samples);
    curve.samples_.resize(n);
    const double h = ell / static_cast<double>(n);
    std::size_t panel = 0;
    double prev_theta = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double target = static_cast<double>(j) * h;
        while (panel + 1 < static_cast<std::size_t>(panels) && curve.panel_s_[panel + 1] <= target)
            ++panel;
        const double t = j == 0 ? 0.0
                                : curve.invert(target, panel * w, (panel + 1) * w,
                                               curve.panel_s_[panel], curve.panel_s_[panel + 1]);
        const RawJet jet = raw_jet(spec, t);
        const double raw_angle = std::atan2(jet.d1.y, jet.d1.x);
        double theta = raw_angle;
        if (j > 0) {
            const double delta = detail::wrap_angle(raw_angle - prev_theta);
            if (std::abs(delta) >= 0.5 * std::numbers::pi) {
                throw CurveError(ErrorCode::QuadratureFailure,
                                 "tangent turns too fast between samples of '" + spec.label +
                                     "'; raise n_samples");
            }
            theta = prev_theta + delta;
        }
        prev_theta = theta;
        curve.samples_[j] = {target, t, jet.p.x, jet.p.y, theta, jet.signed_curvature()};
    }
    const RawJet end = raw_jet(spec, kTwoPi);
    const double end_delta = detail::wrap_angle(std::atan2(end.d1.y, end.d1.x) - prev_theta);
    if (std::abs(end_delta) >= 0.5 * std::numbers::pi) {
        throw CurveError(ErrorCode::QuadratureFailure, "tangent lift failed at period end");
    }
    curve.theta_turn_ = prev_theta + end_delta - curve.samples_[0].theta;
    return curve;
}

struct CurvatureMax {
    double value = 0.0;
    double s = 0.0;
    double t = 0.0;
};

/// max |kappa| over one period: sample argmax refined by golden section on the
/// analytic curvature.
inline CurvatureMax max_curvature(const ArcCurve& curve) {
    auto samples = curve.samples();
    std::size_t best = 0;
    for (std::size_t j = 1; j < samples.size(); ++j)
        if (std::abs(samples[j].kappa) > std::abs(samples[best].kappa)) best = j;

    const auto& spec = curve.spec();
    auto f = [&spec](double t) { return std::abs(raw_jet(spec, t).signed_curvature()); };
    const std::size_t n = samples.size();
    double lo = best == 0 ? samples[n - 1].t - kTwoPi : samples[best - 1].t;
    double hi = best + 1 < n ? samples[best + 1].t : kTwoPi;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
        if (f1 > f2) {
            hi = x2; x2 = x1; f2 = f1; x1 = hi - g * (hi - lo); f1 = f(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2; x2 = lo + g * (hi - lo); f2 = f(x2);
        }
    }
    CurvatureMax out{std::abs(samples[best].kappa), samples[best].s, samples[best].t};
    const double tm = 0.5 * (lo + hi);
    if (const double fm = f(tm); fm > out.value) {
        out.value = fm;
        out.t = std::fmod(tm + kTwoPi, kTwoPi);
        out.s = curve.s_of_t(out.t);
    }
    return out;
}

struct TurningDelta {
    double value = 0.0;  // theta(ell) - theta(0)
    int multiple = 0;    // value / 2pi
};

inline TurningDelta turning_delta(const ArcCurve& curve) {
    const double turn = curve.theta_turn();
    const double m = std::round(turn / kTwoPi);
    if (std::abs(turn - kTwoPi * m) > curve.tolerances().winding) {
        throw CurveError(ErrorCode::NotMultipleOf2Pi,
                         "turning " + std::to_string(turn) + " is not a multiple of 2pi");
    }
    return {turn, static_cast<int>(m)};
}

} // namespace pcurve
