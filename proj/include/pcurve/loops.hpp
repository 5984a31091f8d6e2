#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcurve/arc_curve.hpp"
#include "pcurve/crossings.hpp"
#include "pcurve/cylinder.hpp"
#include "pcurve/error.hpp"

namespace pcurve {

enum class LoopKind { PlaneLoop, CylinderLoop };

inline std::string_view to_string(LoopKind k) {
    return k == LoopKind::PlaneLoop ? "PlaneLoop" : "CylinderLoop";
}

/// A closed sub-arc [a, b]. For a CylinderLoop P(a) = P(b) and `winding` is the
/// number of turns around the cylinder; for a PlaneLoop p(b) = p(a) + (2 pi winding, 0),
/// so winding 0 is a genuine planar loop.
struct Loop {
    double a = 0.0;
    double b = 0.0;
    LoopKind kind = LoopKind::CylinderLoop;
    int winding = 0;

    double length() const { return b - a; }
    friend bool operator==(const Loop&, const Loop&) = default;
};

inline int winding_number(const ArcCurve& curve, double a, double b) {
    if (!(a < b)) throw CurveError(ErrorCode::NotALoop, "loop needs a < b");
    const Vec2 pa = curve.point(a);
    const Vec2 pb = curve.point(b);
    if (cylinder_distance(to_cylinder(pa), to_cylinder(pb)) > 10.0 * curve.closure_tolerance()) {
        throw CurveError(ErrorCode::NotALoop, "P(" + std::to_string(a) + ") != P(" +
                                                  std::to_string(b) + ")");
    }
    const double turns = (pb.x - pa.x) / kTwoPi;
    const double k = std::round(turns);
    if (std::abs(turns - k) > curve.tolerances().winding) {
        throw CurveError(ErrorCode::NotALoop, "winding residual " + std::to_string(turns - k));
    }
    return static_cast<int>(k);
}

inline Loop make_cylinder_loop(const ArcCurve& curve, double a, double b) {
    return {a, b, LoopKind::CylinderLoop, winding_number(curve, a, b)};
}

/// The loop at a crossing, [s1, s2].
inline Loop crossing_loop(const Crossing& c) {
    return {c.s1, c.s2, LoopKind::CylinderLoop, c.winding};
}

/// The rest of the period after removing [a, b]: the path from b to a + ell.
inline Loop complement_loop(const ArcCurve& curve, const Loop& loop) {
    return {loop.b, loop.a + curve.ell(), LoopKind::CylinderLoop, 1 - loop.winding};
}

/// A pair of parameters inside a loop that map to the same cylinder point.
struct InnerPair {
    double x = 0.0;
    double y = 0.0;
    std::size_t crossing = 0;
};

namespace detail {

inline double interior_margin(const ArcCurve& curve) { return 1e-7 * std::max(1.0, curve.ell()); }

inline void require_simple(const std::vector<Crossing>& crossings, std::size_t idx) {
    if (crossings[idx].simplicity != Simplicity::Simple) {
        throw CurveError(ErrorCode::NotSimple, "crossing at s1=" + std::to_string(crossings[idx].s1) +
                                                   " is " + std::string(to_string(crossings[idx].simplicity)));
    }
}

// Representatives of residue r (mod ell) strictly inside (lo, hi).
inline void representatives(double r, double lo, double hi, double ell, double margin,
                            std::vector<double>& out) {
    double x = r + ell * std::ceil((lo - r) / ell);
    for (; x < hi; x += ell) {
        if (x > lo + margin && x < hi - margin) out.push_back(x);
    }
}

} // namespace detail

/// All crossing pairs (x < y) strictly inside [a, b], with x, y real parameters.
/// Crossings that touch the interval on only one branch are skipped.
inline std::vector<InnerPair> inner_pairs(const ArcCurve& curve, const std::vector<Crossing>& crossings,
                                          double a, double b, bool require_simple = false) {
    const double ell = curve.ell();
    const double margin = detail::interior_margin(curve);
    std::vector<InnerPair> out;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < crossings.size(); ++i) {
        xs.clear();
        ys.clear();
        detail::representatives(crossings[i].s1, a, b, ell, margin, xs);
        detail::representatives(crossings[i].s2, a, b, ell, margin, ys);
        for (double x : xs) {
            for (double y : ys) {
                if (std::abs(x - y) >= ell) continue;
                if (require_simple) detail::require_simple(crossings, i);
                out.push_back({std::min(x, y), std::max(x, y), i});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const InnerPair& p, const InnerPair& q) {
        return p.x != q.x ? p.x < q.x : p.y < q.y;
    });
    return out;
}

/// Descends into the earliest inner pair until none is left. The result has
/// no proper sub-loop, so as a simple closed curve on the cylinder its winding
/// lies in {-1, 0, 1}.
inline Loop minimal_subloop(const ArcCurve& curve, const std::vector<Crossing>& crossings, Loop loop) {
    loop.winding = winding_number(curve, loop.a, loop.b);
    loop.kind = LoopKind::CylinderLoop;
    for (;;) {
        const auto pairs = inner_pairs(curve, crossings, loop.a, loop.b);
        if (pairs.empty()) break;
        loop = make_cylinder_loop(curve, pairs.front().x, pairs.front().y);
    }
    if (std::abs(loop.winding) > 1) {
        throw CurveError(ErrorCode::NoCrossingFound,
                         "minimal sub-loop has winding " + std::to_string(loop.winding) +
                             "; a crossing was missed");
    }
    return loop;
}

namespace detail {

struct Piece {
    double lo = 0.0;
    double hi = 0.0;
};

// A closed path assembled from contiguous pieces of the parameter line; the
// pieces meet at crossing points. Positions along it are "virtual" arc length.
struct PieceLoop {
    std::vector<Piece> pieces;

    double length() const {
        double sum = 0.0;
        for (const Piece& p : pieces) sum += p.hi - p.lo;
        return sum;
    }

    // Sub-path [from, to] in virtual coordinates, as original pieces.
    PieceLoop slice(double from, double to) const {
        PieceLoop out;
        double offset = 0.0;
        for (const Piece& p : pieces) {
            const double len = p.hi - p.lo;
            const double lo = std::max(from, offset);
            const double hi = std::min(to, offset + len);
            if (hi > lo) out.pieces.push_back({p.lo + (lo - offset), p.lo + (hi - offset)});
            offset += len;
        }
        return out;
    }

    // Concatenation [from, end] followed by [0, to].
    PieceLoop rotate(double from, double to) const {
        PieceLoop out = slice(from, length());
        PieceLoop tail = slice(0.0, to);
        out.pieces.insert(out.pieces.end(), tail.pieces.begin(), tail.pieces.end());
        return out;
    }
};

inline int piece_winding(const ArcCurve& curve, const PieceLoop& loop) {
    double du = 0.0;
    for (const Piece& p : loop.pieces) du += curve.point(p.hi).x - curve.point(p.lo).x;
    const double turns = du / kTwoPi;
    const double k = std::round(turns);
    if (std::abs(turns - k) > curve.tolerances().winding) {
        throw CurveError(ErrorCode::NotALoop, "piecewise loop does not close");
    }
    return static_cast<int>(k);
}

struct VirtualPair {
    double x = 0.0;  // virtual coordinates, x < y
    double y = 0.0;
};

inline std::vector<VirtualPair> virtual_pairs(const ArcCurve& curve, const std::vector<Crossing>& crossings,
                                              const PieceLoop& loop) {
    const double ell = curve.ell();
    const double margin = interior_margin(curve);
    std::vector<VirtualPair> out;
    std::vector<double> r1, r2;
    for (std::size_t i = 0; i < crossings.size(); ++i) {
        r1.clear();
        r2.clear();
        double offset = 0.0;
        for (const Piece& p : loop.pieces) {
            std::vector<double> loc;
            representatives(crossings[i].s1, p.lo, p.hi, ell, margin, loc);
            for (double x : loc) r1.push_back(offset + (x - p.lo));
            loc.clear();
            representatives(crossings[i].s2, p.lo, p.hi, ell, margin, loc);
            for (double x : loc) r2.push_back(offset + (x - p.lo));
            offset += p.hi - p.lo;
        }
        if (!r1.empty() && !r2.empty()) require_simple(crossings, i);
        for (double x : r1)
            for (double y : r2) out.push_back({std::min(x, y), std::max(x, y)});
    }
    std::sort(out.begin(), out.end(), [](const VirtualPair& p, const VirtualPair& q) {
        return p.x != q.x ? p.x < q.x : p.y < q.y;
    });
    return out;
}

// Induction on the number of crossings. Returns virtual coordinates [x, y] of
// a winding-one sub-loop of `loop` (winding w >= 2).
inline VirtualPair extract_recursive(const ArcCurve& curve, const std::vector<Crossing>& crossings,
                                     const PieceLoop& loop, int w, int depth) {
    if (depth > 10000) throw CurveError(ErrorCode::NoCrossingFound, "recursion did not terminate");
    const auto pairs = virtual_pairs(curve, crossings, loop);
    if (pairs.empty()) {
        throw CurveError(ErrorCode::NoCrossingFound,
                         "loop of winding " + std::to_string(w) + " has no detected crossing");
    }
    const double total = loop.length();
    const VirtualPair split = pairs.front();  // smallest s1
    const PieceLoop first = loop.slice(split.x, split.y);
    const int w1 = piece_winding(curve, first);
    const int w2 = w - w1;
    if (w1 == 1) return split;
    if (w1 >= 2) {
        const VirtualPair inner = extract_recursive(curve, crossings, first, w1, depth + 1);
        return {split.x + inner.x, split.x + inner.y};
    }
    // second loop: [split.y, total] then [0, split.x], based at the split point
    const PieceLoop second = loop.rotate(split.y, split.x);
    const double junction = total - split.y;  // where the original base point sits
    const VirtualPair inner = extract_recursive(curve, crossings, second, w2, depth + 1);
    auto to_outer = [&](double z) { return z <= junction ? split.y + z : z - junction; };
    if (inner.y <= junction || inner.x >= junction) {
        return {to_outer(inner.x), to_outer(inner.y)};
    }
    // the sub-loop passes through the base point: take its complement
    const double cx = to_outer(inner.y);
    const double cy = to_outer(inner.x);
    const PieceLoop rest = loop.slice(cx, cy);
    const int wr = piece_winding(curve, rest);
    if (wr == 1) return {cx, cy};
    if (wr < 1) throw CurveError(ErrorCode::NoCrossingFound, "complement winding below one");
    const VirtualPair deeper = extract_recursive(curve, crossings, rest, wr, depth + 1);
    return {cx + deeper.x, cx + deeper.y};
}

inline void require_winding_above_one(const ArcCurve& curve, Loop& loop) {
    loop.winding = winding_number(curve, loop.a, loop.b);
    if (loop.winding <= 1) {
        throw CurveError(ErrorCode::PreconditionViolated,
                         "loop winding " + std::to_string(loop.winding) + " is not above one");
    }
    if (loop.length() >= curve.ell()) {
        throw CurveError(ErrorCode::PreconditionViolated, "loop must be shorter than one period");
    }
}

} // namespace detail

/// Inside a cylinder loop of winding > 1, finds a contiguous sub-loop of
/// winding exactly one by splitting at crossings (earliest first) and recursing
/// into a piece of winding >= 2.
inline Loop extract_winding_one_subloop(const ArcCurve& curve, const std::vector<Crossing>& crossings,
                                        Loop loop) {
    detail::require_winding_above_one(curve, loop);
    detail::PieceLoop top{{{loop.a, loop.b}}};
    const detail::VirtualPair r = detail::extract_recursive(curve, crossings, top, loop.winding, 0);
    Loop out = make_cylinder_loop(curve, loop.a + r.x, loop.a + r.y);
    if (out.winding != 1) {
        throw CurveError(ErrorCode::NoCrossingFound, "extracted loop has winding " +
                                                         std::to_string(out.winding));
    }
    return out;
}

/// Oracle for the extractor: enumerate every inner pair and keep the shortest
/// one of winding one.
inline Loop extract_winding_one_by_enumeration(const ArcCurve& curve,
                                               const std::vector<Crossing>& crossings, Loop loop) {
    detail::require_winding_above_one(curve, loop);
    const auto pairs = inner_pairs(curve, crossings, loop.a, loop.b, true);
    if (pairs.empty()) throw CurveError(ErrorCode::NoCrossingFound, "no crossing inside loop");
    std::optional<Loop> best;
    for (const InnerPair& p : pairs) {
        const int w = winding_number(curve, p.x, p.y);
        if (w != 1) continue;
        if (!best || p.y - p.x < best->length()) best = Loop{p.x, p.y, LoopKind::CylinderLoop, 1};
    }
    if (!best) throw CurveError(ErrorCode::NoCrossingFound, "no winding-one pair inside loop");
    return *best;
}

/// Loops of winding >= 2 available on a curve: crossing loops with winding
/// >= 2 and complements of crossing loops with winding <= -1.
inline std::vector<Loop> high_winding_loops(const ArcCurve& curve, const std::vector<Crossing>& crossings) {
    std::vector<Loop> out;
    for (const Crossing& c : crossings) {
        if (c.winding >= 2) out.push_back(crossing_loop(c));
        else if (c.winding <= -1) out.push_back(complement_loop(curve, crossing_loop(c)));
    }
    return out;
}

} // namespace pcurve
