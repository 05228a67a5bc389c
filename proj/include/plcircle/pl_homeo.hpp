#pragma once

// Orientation-preserving piecewise-linear circle homeomorphisms with
// rational vertices, kept in a canonical lift form so that structural
// equality is group-element equality.

#include "plcircle/circle.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace plc {

struct Vertex {
    Rational x;
    Rational y;

    friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Minakawa exotic-circle data: multiplication by `lambda` on the interval
/// [1/(A-1), A/(A-1)] with its endpoints identified via x ~ A x.
struct ExoticParams {
    Rational A;
    Rational lambda;
};

/// Canonical PL homeomorphism of R/Z.
///
/// The closed vertex list (x_0, y_0), ..., (x_k, y_k) describes a lift on
/// [x_0, x_0 + 1] with x_k = x_0 + 1, y_k = y_0 + 1. In canonical form
///   - every interior vertex and x_0 is a genuine breakpoint,
///   - x_0 is the smallest breakpoint and lies in [0, 1), so all x_i < 1,
///   - y_0 lies in [0, 1),
///   - a map without breakpoints (a rotation) is stored as (0, a), (1, 1 + a).
class PLHomeo {
public:
    PLHomeo() : vertices_{{Rational(0), Rational(0)}, {Rational(1), Rational(1)}} { init_lift_shift(); }

    static PLHomeo identity() { return PLHomeo{}; }

    static PLHomeo rotation(const Rational& alpha) {
        PLHomeo h;
        const Rational a = reduce_mod1(alpha).value();
        h.vertices_ = {{Rational(0), a}, {Rational(1), a + 1}};
        h.init_lift_shift();
        return h;
    }

    /// Builds a map from its pieces on the circle: `starts` strictly
    /// increasing in [0, 1), `slopes[i]` the slope right of `starts[i]`, and
    /// `first_value` any lift of the image of `starts[0]`. Equal adjacent
    /// slopes are merged and the base point is normalized.
    static PLHomeo from_pieces(const std::vector<Rational>& starts, const std::vector<Rational>& slopes,
                               const Rational& first_value) {
        const std::size_t k = starts.size();
        if (k == 0 || slopes.size() != k) throw InvariantError("pieces", "need one slope per piece start");
        for (std::size_t i = 0; i < k; ++i) {
            if (sgn(starts[i]) < 0 || starts[i] >= 1)
                throw InvariantError("pieces", "piece start outside [0,1)");
            if (i > 0 && !(starts[i - 1] < starts[i]))
                throw InvariantError("pieces", "piece starts not strictly increasing");
            if (sgn(slopes[i]) <= 0)
                throw InvariantError("positive slopes", "slope " + to_string(slopes[i]) + " is not positive");
        }
        std::vector<Rational> values(k + 1);
        values[0] = first_value;
        for (std::size_t i = 0; i < k; ++i) {
            const Rational next = i + 1 < k ? starts[i + 1] : starts[0] + 1;
            values[i + 1] = values[i] + slopes[i] * (next - starts[i]);
        }
        if (values[k] != values[0] + 1)
            throw InvariantError("degree one", "total rise " + to_string(values[k] - values[0]) + " differs from 1");

        std::vector<std::size_t> kept;
        for (std::size_t i = 0; i < k; ++i) {
            const Rational& left = slopes[(i + k - 1) % k];
            if (left != slopes[i]) kept.push_back(i);
        }
        if (kept.empty()) return rotation(values[0] - starts[0]);

        PLHomeo h;
        h.vertices_.clear();
        const Integer shift = floor_of(values[kept.front()]);
        for (const std::size_t i : kept) h.vertices_.push_back({starts[i], values[i] - shift});
        h.vertices_.push_back({h.vertices_.front().x + 1, h.vertices_.front().y + 1});
        h.init_lift_shift();
        return h;
    }

    /// Validates a user-supplied lift vertex list and returns the canonical
    /// map. Removable vertices are merged; anything that is not an
    /// orientation-preserving degree-one homeomorphism is rejected.
    static PLHomeo from_vertices(const std::vector<Vertex>& vs) {
        if (vs.size() < 2) throw InvariantError("vertex count", "need at least two lift vertices");
        const Rational& x0 = vs.front().x;
        if (sgn(x0) < 0 || x0 >= 1) throw InvariantError("base point", "x_0 = " + to_string(x0) + " not in [0,1)");
        for (std::size_t i = 1; i < vs.size(); ++i) {
            if (!(vs[i - 1].x < vs[i].x))
                throw InvariantError("increasing x", "x coordinates must be strictly increasing at vertex " +
                                                         std::to_string(i));
            if (!(vs[i - 1].y < vs[i].y))
                throw InvariantError("positive slopes", "slope on piece " + std::to_string(i - 1) +
                                                            " is not strictly positive");
        }
        if (vs.back().x != x0 + 1) throw InvariantError("closure", "last x must equal x_0 + 1");
        if (vs.back().y != vs.front().y + 1) throw InvariantError("degree one", "last y must equal y_0 + 1");

        // Re-express the pieces with starts in [0, 1), rotated so they sort.
        struct Piece {
            Rational start, slope, value;
        };
        std::vector<Piece> pieces;
        for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
            const Rational slope = (vs[i + 1].y - vs[i].y) / (vs[i + 1].x - vs[i].x);
            if (vs[i].x >= 1)
                pieces.push_back({vs[i].x - 1, slope, vs[i].y - 1});
            else
                pieces.push_back({vs[i].x, slope, vs[i].y});
        }
        std::stable_sort(pieces.begin(), pieces.end(),
                         [](const Piece& a, const Piece& b) { return a.start < b.start; });
        std::vector<Rational> starts, slopes;
        for (const auto& p : pieces) {
            starts.push_back(p.start);
            slopes.push_back(p.slope);
        }
        return from_pieces(starts, slopes, pieces.front().value);
    }

    const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
    std::size_t piece_count() const noexcept { return vertices_.size() - 1; }
    bool is_rotation() const noexcept { return piece_count() == 1; }
    bool is_identity() const { return is_rotation() && sgn(vertices_[0].y) == 0; }

    Rational slope(std::size_t piece) const {
        return (vertices_[piece + 1].y - vertices_[piece].y) / (vertices_[piece + 1].x - vertices_[piece].x);
    }

    std::vector<CirclePoint> breakpoints() const {
        std::vector<CirclePoint> out;
        if (is_rotation()) return out;
        for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) out.push_back(reduce_mod1(vertices_[i].x));
        return out;
    }

    std::size_t breakpoint_count() const noexcept { return is_rotation() ? 0 : piece_count(); }

    /// Piece starts on the circle (breakpoints, or {0} for a rotation).
    std::vector<Rational> piece_starts() const {
        std::vector<Rational> out;
        for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) out.push_back(vertices_[i].x);
        return out;
    }

    CirclePoint operator()(const CirclePoint& p) const {
        const Rational t = to_window(p.value());
        const std::size_t i = piece_at(t);
        return reduce_mod1(vertices_[i].y + slope(i) * (t - vertices_[i].x));
    }

    CirclePoint preimage(const CirclePoint& q) const {
        Rational u = q.value() - vertices_[0].y;
        u -= Rational(floor_of(u));
        u += vertices_[0].y;
        // u in [y_0, y_0 + 1)
        auto it = std::upper_bound(vertices_.begin(), vertices_.end(), u,
                                   [](const Rational& v, const Vertex& w) { return v < w.y; });
        const std::size_t j = static_cast<std::size_t>(it - vertices_.begin()) - 1;
        return reduce_mod1(vertices_[j].x + (u - vertices_[j].y) / slope(j));
    }

    /// The lift H of this map normalized by H(0) in [0, 1), evaluated at any
    /// real (rational) t. H(t + 1) = H(t) + 1.
    Rational lift(const Rational& t) const { return vertex_lift(t) - Rational(lift_shift_); }

    /// (left derivative, right derivative) at p.
    std::pair<Rational, Rational> one_sided_slopes(const CirclePoint& p) const {
        const Rational t = to_window(p.value());
        const std::size_t i = piece_at(t);
        const Rational right = slope(i);
        if (t == vertices_[i].x) return {slope((i + piece_count() - 1) % piece_count()), right};
        return {right, right};
    }

    Rational right_slope(const CirclePoint& p) const { return slope(piece_at(to_window(p.value()))); }

    friend bool operator==(const PLHomeo& a, const PLHomeo& b) { return a.vertices_ == b.vertices_; }

    /// Empty when the canonical-form invariants hold, otherwise the name of
    /// the first violated one.
    std::optional<std::string> invariant_violation() const {
        const auto& vs = vertices_;
        if (vs.size() < 2) return "vertex count";
        if (sgn(vs[0].x) < 0 || vs[0].x >= 1) return "base point";
        if (sgn(vs[0].y) < 0 || vs[0].y >= 1) return "base value";
        for (std::size_t i = 1; i < vs.size(); ++i) {
            if (!(vs[i - 1].x < vs[i].x)) return "increasing x";
            if (!(vs[i - 1].y < vs[i].y)) return "positive slopes";
        }
        if (vs.back().x != vs[0].x + 1) return "closure";
        if (vs.back().y != vs[0].y + 1) return "degree one";
        Rational rise = 0;
        for (std::size_t i = 0; i < piece_count(); ++i) rise += slope(i) * (vs[i + 1].x - vs[i].x);
        if (rise != 1) return "degree one";
        if (is_rotation()) {
            if (sgn(vs[0].x) != 0) return "rotation base point";
            return std::nullopt;
        }
        const std::size_t k = piece_count();
        for (std::size_t i = 0; i < k; ++i)
            if (slope(i) == slope((i + k - 1) % k)) return "no removable breakpoints";
        for (std::size_t i = 0; i < k; ++i)
            if (vs[i].x >= 1) return "base point is the smallest breakpoint";
        return std::nullopt;
    }

private:
    // t shifted into [x_0, x_0 + 1).
    Rational to_window(const Rational& t) const {
        Rational u = t - vertices_[0].x;
        u -= Rational(floor_of(u));
        return u + vertices_[0].x;
    }

    std::size_t piece_at(const Rational& t) const {
        auto it = std::upper_bound(vertices_.begin(), vertices_.end(), t,
                                   [](const Rational& v, const Vertex& w) { return v < w.x; });
        return static_cast<std::size_t>(it - vertices_.begin()) - 1;
    }

    Rational vertex_lift(const Rational& t) const {
        const Integer n = floor_of(t - vertices_[0].x);
        const Rational u = t - Rational(n);
        const std::size_t i = piece_at(u);
        return vertices_[i].y + slope(i) * (u - vertices_[i].x) + Rational(n);
    }

    void init_lift_shift() { lift_shift_ = floor_of(vertex_lift(Rational(0))); }

    std::vector<Vertex> vertices_;
    Integer lift_shift_{0};
};

inline PLHomeo rotation(const Rational& alpha) { return PLHomeo::rotation(alpha); }

inline CirclePoint eval(const PLHomeo& h, const CirclePoint& p) { return h(p); }

inline std::pair<Rational, Rational> left_right_slopes(const PLHomeo& h, const CirclePoint& p) {
    return h.one_sided_slopes(p);
}

/// g after h.
inline PLHomeo compose(const PLHomeo& g, const PLHomeo& h) {
    std::set<Rational> cuts;
    for (const auto& s : h.piece_starts()) cuts.insert(s);
    for (const auto& s : g.piece_starts()) cuts.insert(h.preimage(reduce_mod1(s)).value());
    std::vector<Rational> starts(cuts.begin(), cuts.end());
    std::vector<Rational> slopes;
    slopes.reserve(starts.size());
    for (const auto& c : starts) {
        const CirclePoint p = reduce_mod1(c);
        slopes.push_back(h.right_slope(p) * g.right_slope(h(p)));
    }
    return PLHomeo::from_pieces(starts, slopes, g(h(reduce_mod1(starts[0]))).value());
}

inline PLHomeo inverse(const PLHomeo& h) {
    struct Piece {
        Rational start, slope, value;
    };
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i < h.piece_count(); ++i) {
        const Vertex& v = h.vertices()[i];
        pieces.push_back({reduce_mod1(v.y).value(), 1 / h.slope(i), v.x});
    }
    std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.start < b.start; });
    std::vector<Rational> starts, slopes;
    for (const auto& p : pieces) {
        starts.push_back(p.start);
        slopes.push_back(p.slope);
    }
    return PLHomeo::from_pieces(starts, slopes, pieces.front().value);
}

/// h^n by sequential composition (negative n iterates the inverse).
inline PLHomeo iterate(const PLHomeo& h, long n) {
    if (n < 0) return iterate(inverse(h), -n);
    PLHomeo out;
    for (long i = 0; i < n; ++i) out = compose(h, out);
    return out;
}

inline PLHomeo conjugate(const PLHomeo& phi, const PLHomeo& g) { return compose(compose(phi, g), inverse(phi)); }

/// Two-piece element of the exotic circle S_A: multiplication by lambda on
/// [1/(A-1), A/(A-1)], read in the coordinate u = x - 1/(A-1).
inline PLHomeo exotic_element(const ExoticParams& e) {
    if (!(e.A > 1)) throw InvariantError("exotic modulus", "A must exceed 1");
    if (!(e.lambda > 1 && e.lambda < e.A)) throw InvariantError("exotic multiplier", "lambda must lie in (1, A)");
    const Rational c = 1 / (e.A - 1);
    const Rational wrap = e.A / (e.lambda * (e.A - 1)) - c;
    const Rational start_value = (e.lambda - 1) * c;
    return PLHomeo::from_pieces({Rational(0), wrap}, {e.lambda, e.lambda / e.A}, start_value);
}

/// Deterministic pseudo-random map with at most k breakpoints whose vertex
/// coordinates have denominators at most `denom_bound`.
inline PLHomeo random_pl(std::uint64_t seed, std::size_t k, long denom_bound) {
    if (denom_bound < 1) throw std::invalid_argument("denominator bound must be positive");
    std::mt19937_64 rng(seed);
    auto draw = [&] {
        std::uniform_int_distribution<long> dd(1, denom_bound);
        const long d = dd(rng);
        std::uniform_int_distribution<long> nd(0, d - 1);
        return make_rational(nd(rng), d);
    };
    if (k == 0) return rotation(draw());

    auto draw_set = [&] {
        std::set<Rational> s;
        for (std::size_t attempts = 0; s.size() < k && attempts < 64 * k + 64; ++attempts) s.insert(draw());
        return std::vector<Rational>(s.begin(), s.end());
    };
    std::vector<Rational> xs = draw_set();
    std::vector<Rational> ys = draw_set();
    const std::size_t m = std::min(xs.size(), ys.size());
    xs.resize(m);
    ys.resize(m);
    std::uniform_int_distribution<std::size_t> sd(0, m - 1);
    const std::size_t shift = sd(rng);

    // x_i -> y_{i + shift}, lifted so the images increase by one full turn.
    std::vector<Vertex> vs;
    for (std::size_t i = 0; i <= m; ++i) {
        const std::size_t j = i + shift;
        const Rational x = i < m ? xs[i] : xs[0] + 1;
        Rational y = ys[j % m] + Rational(static_cast<long>(j / m));
        vs.push_back({x, y});
    }
    return PLHomeo::from_vertices(vs);
}

}  // namespace plc
