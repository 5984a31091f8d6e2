#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pcurve/arc_curve.hpp"
#include "pcurve/cylinder.hpp"
#include "pcurve/error.hpp"

namespace pcurve {

enum class Simplicity { Simple, Tangential, Multiple };

inline std::string_view to_string(Simplicity s) {
    switch (s) {
    case Simplicity::Simple: return "Simple";
    case Simplicity::Tangential: return "Tangential";
    case Simplicity::Multiple: return "Multiple";
    }
    return "Unknown";
}

/// A self-intersection of the cylinder curve: P(s1) = P(s2), 0 <= s1 < s2 < ell,
/// with u(s2) - u(s1) = 2*pi*winding.
struct Crossing {
    double s1 = 0.0;
    double s2 = 0.0;
    CylinderPoint point;
    int winding = 0;
    double alpha = 0.0;  // unsigned angle between the tangents, in [0, pi]
    Simplicity simplicity = Simplicity::Simple;
    double residual = 0.0;

    friend bool operator==(const Crossing&, const Crossing&) = default;
};

namespace detail {

struct Refined {
    double s1 = 0.0;
    double s2 = 0.0;
    double residual = 0.0;
};

// Levenberg-Marquardt on F(a, b) = p(a) - p(b) + (2 pi k, 0). Handles both the
// transversal case (quadratic convergence) and tangential contact, where the
// Jacobian [T(a), -T(b)] degenerates.
inline Refined refine_pair(const ArcCurve& curve, double a, double b, int k) {
    auto residual_at = [&](double x, double y, CurvePoint& px, CurvePoint& py) {
        px = curve.evaluate(x);
        py = curve.evaluate(y);
        return Vec2{px.point.x - py.point.x + kTwoPi * k, px.point.y - py.point.y};
    };
    CurvePoint pa, pb;
    Vec2 f = residual_at(a, b, pa, pb);
    double fn = norm(f);
    double lambda = 1e-6;
    for (int it = 0; it < 200 && fn > 1e-15; ++it) {
        const Vec2 ta = pa.tangent;
        const Vec2 tb{-pb.tangent.x, -pb.tangent.y};
        // normal equations of J = [ta tb]
        const double j11 = dot(ta, ta), j12 = dot(ta, tb), j22 = dot(tb, tb);
        const double g1 = dot(ta, f), g2 = dot(tb, f);
        bool improved = false;
        for (int tries = 0; tries < 30; ++tries) {
            const double m11 = j11 + lambda, m22 = j22 + lambda;
            const double det = m11 * m22 - j12 * j12;
            const double da = -(m22 * g1 - j12 * g2) / det;
            const double db = -(m11 * g2 - j12 * g1) / det;
            CurvePoint qa, qb;
            const Vec2 g = residual_at(a + da, b + db, qa, qb);
            const double gn = norm(g);
            if (gn < fn) {
                a += da;
                b += db;
                pa = qa;
                pb = qb;
                f = g;
                const double step = std::hypot(da, db);
                fn = gn;
                lambda = std::max(lambda * 0.1, 1e-15);
                improved = true;
                if (step < 1e-16 * (1.0 + std::abs(a) + std::abs(b))) it = 1 << 20;
                break;
            }
            lambda *= 10.0;
        }
        if (!improved) break;
    }
    return {a, b, fn};
}

inline double cyclic_gap(double x, double y, double period) {
    double d = std::abs(x - y);
    return std::min(d, period - d);
}

struct SegmentHit {
    bool intersects = false;
    double lambda = 0.0;  // position along segment A
    double mu = 0.0;      // position along segment B
    double distance = 0.0;
};

inline double point_segment(Vec2 p, Vec2 a, Vec2 b, double& param) {
    const Vec2 d = b - a;
    const double len2 = dot(d, d);
    param = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
    return norm(p - (a + param * d));
}

inline SegmentHit segment_test(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
    SegmentHit hit;
    const Vec2 r = a1 - a0, q = b1 - b0;
    const double denom = cross(r, q);
    if (denom != 0.0) {
        const Vec2 w = b0 - a0;
        const double lam = cross(w, q) / denom;
        const double mu = cross(w, r) / denom;
        if (lam >= 0.0 && lam <= 1.0 && mu >= 0.0 && mu <= 1.0) {
            hit.intersects = true;
            hit.lambda = lam;
            hit.mu = mu;
            return hit;
        }
    }
    double p;
    double best = point_segment(a0, b0, b1, p);
    hit.lambda = 0.0;
    hit.mu = p;
    if (double d = point_segment(a1, b0, b1, p); d < best) { best = d; hit.lambda = 1.0; hit.mu = p; }
    if (double d = point_segment(b0, a0, a1, p); d < best) { best = d; hit.lambda = p; hit.mu = 0.0; }
    if (double d = point_segment(b1, a0, a1, p); d < best) { best = d; hit.lambda = p; hit.mu = 1.0; }
    hit.distance = best;
    return hit;
}

struct Candidate {
    double a = 0.0;
    double b = 0.0;
    bool transversal = false;
};

} // namespace detail

/// Classifies a refined crossing against the rest of the crossing list:
/// Multiple when another crossing sits at the same cylinder point, Tangential
/// when the tangents are (anti)parallel within the angle floor, else Simple.
inline Simplicity classify_crossing(const ArcCurve& curve, const Crossing& crossing,
                                    const std::vector<Crossing>& all = {}) {
    const double radius = curve.tolerances().cluster_radius(curve.ell());
    for (const Crossing& other : all) {
        if (other.s1 == crossing.s1 && other.s2 == crossing.s2) continue;
        if (cylinder_distance(other.point, crossing.point) < radius) return Simplicity::Multiple;
    }
    const double floor = curve.tolerances().angle_floor;
    if (crossing.alpha < floor || std::numbers::pi - crossing.alpha < floor)
        return Simplicity::Tangential;
    return Simplicity::Simple;
}

/// Every self-intersection of the cylinder curve over one period, sorted by s1.
///
/// Segments of the sampled polyline are hashed into a uniform grid on the
/// cylinder strip (phi wraps), candidate pairs sharing a cell are tested
/// exactly, and each hit or near miss is polished on the analytic curve.
inline std::vector<Crossing> find_crossings(const ArcCurve& curve) {
    const auto samples = curve.samples();
    const std::size_t n = samples.size();
    const double ell = curve.ell();
    const double h = curve.spacing();
    const double tol = curve.closure_tolerance();

    std::vector<Vec2> vert(n + 1);
    for (std::size_t j = 0; j < n; ++j) vert[j] = {samples[j].u, samples[j].v};
    vert[n] = {samples[0].u + kTwoPi, samples[0].v};

    // each segment in its own frame, start phi in [0, 2pi)
    std::vector<double> shift(n);
    double max_len = 0.0;
    double vmin = vert[0].y;
    for (std::size_t j = 0; j < n; ++j) {
        shift[j] = kTwoPi * std::floor(vert[j].x / kTwoPi);
        max_len = std::max(max_len, norm(vert[j + 1] - vert[j]));
        vmin = std::min(vmin, vert[j].y);
    }
    const double near = 0.25 * h;
    const auto columns = static_cast<std::int64_t>(
        std::max(1.0, std::floor(kTwoPi / std::max(2.0 * max_len, 1e-6))));
    const double cell = kTwoPi / static_cast<double>(columns);

    std::unordered_map<std::int64_t, std::vector<std::uint32_t>> grid;
    grid.reserve(4 * n);
    for (std::size_t j = 0; j < n; ++j) {
        const Vec2 a = vert[j] - Vec2{shift[j], 0.0};
        const Vec2 b = vert[j + 1] - Vec2{shift[j], 0.0};
        const auto x0 = static_cast<std::int64_t>(std::floor((std::min(a.x, b.x) - near) / cell));
        const auto x1 = static_cast<std::int64_t>(std::floor((std::max(a.x, b.x) + near) / cell));
        const auto y0 = static_cast<std::int64_t>(std::floor((std::min(a.y, b.y) - near - vmin) / cell));
        const auto y1 = static_cast<std::int64_t>(std::floor((std::max(a.y, b.y) + near - vmin) / cell));
        for (auto cx = x0; cx <= x1; ++cx) {
            const std::int64_t wrapped = ((cx % columns) + columns) % columns;
            for (auto cy = y0; cy <= y1; ++cy)
                grid[wrapped * 4000003 + cy].push_back(static_cast<std::uint32_t>(j));
        }
    }

    std::vector<std::uint64_t> pairs;
    for (const auto& [key, segs] : grid) {
        for (std::size_t p = 0; p < segs.size(); ++p) {
            for (std::size_t q = p + 1; q < segs.size(); ++q) {
                std::uint32_t i = std::min(segs[p], segs[q]);
                std::uint32_t j = std::max(segs[p], segs[q]);
                if (j - i <= 1 || (i == 0 && j == n - 1)) continue;
                pairs.push_back((static_cast<std::uint64_t>(i) << 32) | j);
            }
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    std::vector<detail::Candidate> candidates;
    for (std::uint64_t key : pairs) {
        const auto i = static_cast<std::size_t>(key >> 32);
        const auto j = static_cast<std::size_t>(key & 0xffffffffu);
        const Vec2 a0 = vert[i] - Vec2{shift[i], 0.0}, a1 = vert[i + 1] - Vec2{shift[i], 0.0};
        Vec2 b0 = vert[j] - Vec2{shift[j], 0.0}, b1 = vert[j + 1] - Vec2{shift[j], 0.0};
        const double off = kTwoPi * std::round((a0.x - b0.x) / kTwoPi);
        b0.x += off;
        b1.x += off;
        const detail::SegmentHit hit = detail::segment_test(a0, a1, b0, b1);
        if (hit.intersects || hit.distance < near) {
            candidates.push_back({samples[i].s + hit.lambda * h, samples[j].s + hit.mu * h,
                                  hit.intersects});
        }
    }

    std::vector<Crossing> found;
    for (const auto& cand : candidates) {
        const double du = curve.point(cand.b).x - curve.point(cand.a).x;
        const int k = static_cast<int>(std::round(du / kTwoPi));
        const detail::Refined r = detail::refine_pair(curve, cand.a, cand.b, k);
        if (!(r.residual < tol)) {
            if (cand.transversal) {
                throw CurveError(ErrorCode::ResolutionTooCoarse,
                                 "crossing candidate near s=" + std::to_string(cand.a) +
                                     " did not refine; raise n_samples");
            }
            continue;
        }
        double r1 = curve.reduce(r.s1).first;
        double r2 = curve.reduce(r.s2).first;
        if (ell - r1 < 1e-12 * ell) r1 = 0.0;
        if (ell - r2 < 1e-12 * ell) r2 = 0.0;
        if (detail::cyclic_gap(r1, r2, ell) < 1e-8 * ell) continue;  // collapsed onto itself
        if (detail::cyclic_gap(r1, r2, ell) < h) {
            throw CurveError(ErrorCode::ResolutionTooCoarse,
                             "loop shorter than the sample spacing near s=" + std::to_string(r1));
        }
        Crossing c;
        c.s1 = std::min(r1, r2);
        c.s2 = std::max(r1, r2);
        c.residual = r.residual;
        found.push_back(c);
    }

    // merge duplicates reached from neighbouring segment pairs
    const double same = 1e-7 * std::max(1.0, ell);
    std::vector<Crossing> unique;
    for (const Crossing& c : found) {
        bool dup = false;
        for (Crossing& u : unique) {
            if (detail::cyclic_gap(c.s1, u.s1, ell) < same && detail::cyclic_gap(c.s2, u.s2, ell) < same) {
                dup = true;
                if (c.residual < u.residual) u = c;
                break;
            }
        }
        if (!dup) unique.push_back(c);
    }

    for (Crossing& c : unique) {
        const CurvePoint p1 = curve.evaluate(c.s1);
        const CurvePoint p2 = curve.evaluate(c.s2);
        c.point = to_cylinder(p1.point);
        const double turns = (p2.point.x - p1.point.x) / kTwoPi;
        c.winding = static_cast<int>(std::round(turns));
        if (std::abs(turns - c.winding) > curve.tolerances().winding) {
            throw CurveError(ErrorCode::ResolutionTooCoarse, "winding residual too large");
        }
        c.alpha = std::atan2(std::abs(cross(p1.tangent, p2.tangent)), dot(p1.tangent, p2.tangent));
    }
    std::sort(unique.begin(), unique.end(), [](const Crossing& x, const Crossing& y) {
        return x.s1 != y.s1 ? x.s1 < y.s1 : x.s2 < y.s2;
    });

    for (std::size_t i = 0; i < unique.size(); ++i) {
        for (std::size_t j = i + 1; j < unique.size(); ++j) {
            const Crossing& x = unique[i];
            const Crossing& y = unique[j];
            if (detail::cyclic_gap(x.s1, y.s1, ell) < h && detail::cyclic_gap(x.s2, y.s2, ell) < h) {
                throw CurveError(ErrorCode::ResolutionTooCoarse,
                                 "two crossings closer than the sample spacing near s=" +
                                     std::to_string(x.s1));
            }
        }
    }
    for (Crossing& c : unique) c.simplicity = classify_crossing(curve, c, unique);
    return unique;
}

/// The planar pair behind a cylinder crossing: p(s2) = p(s1 + winding*ell).
inline std::pair<double, double> planar_pair(const ArcCurve& curve, const Crossing& c) {
    const double x = c.s1 + c.winding * curve.ell();
    return {std::min(x, c.s2), std::max(x, c.s2)};
}

inline bool all_simple(const std::vector<Crossing>& crossings) {
    return std::all_of(crossings.begin(), crossings.end(),
                       [](const Crossing& c) { return c.simplicity == Simplicity::Simple; });
}

} // namespace pcurve
