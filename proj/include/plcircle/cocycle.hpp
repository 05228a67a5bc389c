#pragma once

// Derivative-jump cocycle, the affine isometric action it induces on
// finitely supported vectors of l^2(S^1), and the breakpoint-growth
// experiments for maps with a fixed point.
//
// Vectors are stored multiplicatively: the additive coordinate at x is the
// log of the stored positive rational, so every algebraic identity can be
// checked exactly and logs only appear in norms.

#include "plcircle/circle.hpp"
#include "plcircle/pl_homeo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace plc {

/// Finitely supported map from circle points to positive rationals; the
/// value 1 (additive zero) is never stored.
class FiniteVector {
public:
    using Storage = std::map<CirclePoint, Rational>;

    FiniteVector() = default;

    const Rational& at(const CirclePoint& p) const {
        static const Rational one(1);
        auto it = entries_.find(p);
        return it == entries_.end() ? one : it->second;
    }

    void set(const CirclePoint& p, const Rational& value) {
        if (sgn(value) <= 0) throw InvariantError("positive entries", "vector entry must be positive");
        if (value == 1)
            entries_.erase(p);
        else
            entries_[p] = value;
    }

    /// Multiplies the entry at p (additively: adds).
    void scale(const CirclePoint& p, const Rational& factor) { set(p, at(p) * factor); }

    const Storage& entries() const noexcept { return entries_; }
    std::size_t support_size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    std::vector<CirclePoint> support() const {
        std::vector<CirclePoint> out;
        for (const auto& [p, v] : entries_) out.push_back(p);
        return out;
    }

    Rational product() const {
        Rational out(1);
        for (const auto& [p, v] : entries_) out *= v;
        return out;
    }

    friend bool operator==(const FiniteVector&, const FiniteVector&) = default;

private:
    Storage entries_;
};

/// A vector that came out of `jump_cocycle`; support is BP(h).
using JumpVector = FiniteVector;

/// D+h(x) / D-h(x); equals 1 off the breakpoints.
inline Rational jump(const PLHomeo& h, const CirclePoint& x) {
    const auto [left, right] = h.one_sided_slopes(x);
    return right / left;
}

inline JumpVector jump_cocycle(const PLHomeo& h) {
    JumpVector out;
    const std::size_t k = h.piece_count();
    if (h.is_rotation()) return out;
    for (std::size_t i = 0; i < k; ++i)
        out.set(reduce_mod1(h.vertices()[i].x), h.slope(i) / h.slope((i + k - 1) % k));
    return out;
}

/// Pointwise quotient u / v, i.e. the difference vector in additive terms.
inline FiniteVector quotient(const FiniteVector& u, const FiniteVector& v) {
    FiniteVector out = u;
    for (const auto& [p, value] : v.entries()) out.scale(p, 1 / value);
    return out;
}

/// rho(h) v: the value at x is v(h^-1 x) * jump(h^-1, x).
inline FiniteVector affine_apply(const PLHomeo& h, const FiniteVector& v) {
    const PLHomeo h_inv = inverse(h);
    FiniteVector out = jump_cocycle(h_inv);
    for (const auto& [p, value] : v.entries()) out.scale(h(p), value);
    return out;
}

inline double l2_norm_sq(const FiniteVector& v) {
    double sum = 0.0;
    for (const auto& [p, value] : v.entries()) {
        const double l = log_ratio(value);
        sum += l * l;
    }
    return sum;
}

/// Data extracted from a map with a fixed point for the breakpoint-growth
/// lower bounds. All logs refer to the analyzed map, which is the input or
/// its inverse when the input expands on the chosen component.
struct GrowthParams {
    Arc component;            ///< component (x0, x1) of the open support
    bool used_inverse = false;
    Rational right_slope_x0;  ///< D+f(x0)
    Rational left_slope_x1;   ///< D-f(x1)
    double c0 = 0.0;          ///< log D+f(x0) < 0
    double c1 = 0.0;          ///< log D-f(x1) > 0
    std::vector<Rational> jump_value_superset;  ///< products of jumps over subsets of BP(f), sorted
    double mu = 0.0;
    double beta = 0.0;

    double breakpoint_bound(long n) const { return static_cast<double>(n) * (c1 - c0) / mu; }
};

/// Exact fixed-point structure of a map on the circle.
struct FixedPointSet {
    bool full = false;                 ///< h is the identity
    std::vector<CirclePoint> points;   ///< isolated fixed points
    std::vector<std::pair<CirclePoint, CirclePoint>> arcs;  ///< maximal closed arcs [a, b] of fixed points

    bool empty() const { return !full && points.empty() && arcs.empty(); }
};

namespace detail {

// Solutions of H(t) - t in Z per affine piece of the vertex lift.
inline FixedPointSet solve_fixed_points(const PLHomeo& h) {
    FixedPointSet out;
    if (h.is_identity()) {
        out.full = true;
        return out;
    }
    const auto& vs = h.vertices();
    std::set<CirclePoint> pts;
    std::vector<std::pair<Rational, Rational>> raw_arcs;  // in [x0, x0 + 1]
    for (std::size_t i = 0; i < h.piece_count(); ++i) {
        const Rational d0 = vs[i].y - vs[i].x;
        const Rational d1 = vs[i + 1].y - vs[i + 1].x;
        if (d0 == d1) {
            if (d0.get_den() == 1) raw_arcs.emplace_back(vs[i].x, vs[i + 1].x);
            continue;
        }
        const Rational lo = d0 < d1 ? d0 : d1;
        const Rational hi = d0 < d1 ? d1 : d0;
        for (Integer m = ceil_of(lo); Rational(m) <= hi; ++m) {
            // d0 + (d1 - d0) * s = m for s in [0, 1]
            const Rational s = (Rational(m) - d0) / (d1 - d0);
            pts.insert(reduce_mod1(vs[i].x + s * (vs[i + 1].x - vs[i].x)));
        }
    }
    // Merge touching arcs (the last may wrap onto the first).
    std::vector<std::pair<Rational, Rational>> merged;
    for (const auto& a : raw_arcs) {
        if (!merged.empty() && merged.back().second == a.first)
            merged.back().second = a.second;
        else
            merged.push_back(a);
    }
    if (merged.size() > 1 && merged.back().second == merged.front().first + 1) {
        merged.front().first = merged.back().first;
        merged.pop_back();
    }
    for (const auto& [a, b] : merged) {
        const CirclePoint pa = reduce_mod1(a), pb = reduce_mod1(b);
        for (auto it = pts.begin(); it != pts.end();) {
            const bool inside = *it == pa || *it == pb || (pa != pb && cyclic_between(pa, *it, pb));
            it = inside ? pts.erase(it) : std::next(it);
        }
        out.arcs.emplace_back(pa, pb);
    }
    out.points.assign(pts.begin(), pts.end());
    std::sort(out.arcs.begin(), out.arcs.end());
    return out;
}

// Boundary points of the fixed set, in circular order.
inline std::vector<CirclePoint> fixed_boundary(const FixedPointSet& fs) {
    std::vector<CirclePoint> out = fs.points;
    for (const auto& [a, b] : fs.arcs) {
        out.push_back(a);
        out.push_back(b);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

inline std::vector<Rational> jump_subset_products(const PLHomeo& f) {
    std::set<Rational> values{Rational(1)};
    const JumpVector jumps = jump_cocycle(f);
    for (const auto& [p, j] : jumps.entries()) {
        std::set<Rational> next = values;
        for (const auto& v : values) next.insert(v * j);
        values = std::move(next);
    }
    return {values.begin(), values.end()};
}

/// Picks the component of the open support that starts at the smallest
/// fixed boundary point and analyzes f or f^-1, whichever contracts there.
inline GrowthParams growth_params(const PLHomeo& f) {
    if (f.is_identity()) throw std::invalid_argument("growth_params: identity has empty open support");
    const FixedPointSet fs = detail::solve_fixed_points(f);
    if (fs.empty()) throw std::invalid_argument("growth_params: map has no fixed point");

    // Fixed-set pieces in circular order; a support component runs from the
    // right end of one piece to the left end of the next.
    struct Piece {
        CirclePoint left, right;
    };
    std::vector<Piece> pieces;
    for (const auto& p : fs.points) pieces.push_back({p, p});
    for (const auto& [a, b] : fs.arcs) pieces.push_back({a, b});
    std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.left < b.left; });
    // Arcs are sorted by start; an arc wrapping through 0 sorts by its start.
    const CirclePoint x0 = pieces.front().right;
    const CirclePoint x1 = pieces.size() > 1 ? pieces[1].left : pieces.front().left;

    GrowthParams gp;
    gp.component = x0 == x1 ? Arc{x0, x1, false} : Arc::between(x0, x1);

    // Displacement of the lift fixing x0 at a point inside the component.
    const Rational len = gp.component.length();
    const Rational mid = x0.value() + len / 2;
    const Rational disp = f.lift(mid) - mid - (f.lift(x0.value()) - x0.value());
    const PLHomeo g = sgn(disp) < 0 ? f : inverse(f);
    gp.used_inverse = sgn(disp) > 0;

    gp.right_slope_x0 = g.one_sided_slopes(x0).second;
    gp.left_slope_x1 = g.one_sided_slopes(x1).first;
    gp.c0 = log_ratio(gp.right_slope_x0);
    gp.c1 = log_ratio(gp.left_slope_x1);
    gp.jump_value_superset = jump_subset_products(g);
    bool first = true;
    for (const auto& s : gp.jump_value_superset) {
        if (s == 1) continue;
        const double l = std::abs(log_ratio(s));
        if (first) {
            gp.mu = gp.beta = l;
            first = false;
        } else {
            gp.mu = std::max(gp.mu, l);
            gp.beta = std::min(gp.beta, l);
        }
    }
    return gp;
}

/// |BP(f^n)| for n = 1..N.
inline std::vector<long> breakpoint_growth(const PLHomeo& f, long N) {
    if (N < 1) throw std::invalid_argument("N must be at least 1");
    std::vector<long> out;
    PLHomeo power;
    for (long n = 1; n <= N; ++n) {
        power = compose(f, power);
        out.push_back(static_cast<long>(power.breakpoint_count()));
    }
    return out;
}

/// Orbit of the zero vector: rho(f^n) 0 equals jump_cocycle(f^-n).
inline FiniteVector orbit_of_zero(const PLHomeo& f_power) { return jump_cocycle(inverse(f_power)); }

/// ||rho(f^n) 0||^2 for n = 1..N, reusing f^(n-1) at each step.
inline std::vector<double> orbit_norm_seq(const PLHomeo& f, long N) {
    if (N < 1) throw std::invalid_argument("N must be at least 1");
    std::vector<double> out;
    PLHomeo power;
    for (long n = 1; n <= N; ++n) {
        power = compose(f, power);
        out.push_back(l2_norm_sq(orbit_of_zero(power)));
    }
    return out;
}

struct GrowthRow {
    long n;
    long breakpoints;
    double norm_sq;
    double bound;
};

/// Both sequences in one pass, with the linear lower bound n (c1 - c0) / mu.
inline std::vector<GrowthRow> growth_table(const PLHomeo& f, const GrowthParams& gp, long N) {
    if (N < 1) throw std::invalid_argument("N must be at least 1");
    std::vector<GrowthRow> rows;
    PLHomeo power;
    for (long n = 1; n <= N; ++n) {
        power = compose(f, power);
        rows.push_back({n, static_cast<long>(power.breakpoint_count()), l2_norm_sq(orbit_of_zero(power)),
                        gp.breakpoint_bound(n)});
    }
    return rows;
}

}  // namespace plc
