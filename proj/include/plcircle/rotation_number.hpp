#pragma once

// Rotation numbers of PL circle maps: exact when a periodic orbit is found
// within the search budget, a Farey bracket otherwise, plus a numeric
// semi-conjugacy to the rotation.

#include "plcircle/circle.hpp"
#include "plcircle/cocycle.hpp"
#include "plcircle/pl_homeo.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace plc {

inline FixedPointSet fixed_points(const PLHomeo& h) { return detail::solve_fixed_points(h); }

/// Some fixed point of h, if any: the first isolated point or arc start,
/// or 0 for the identity.
inline std::optional<CirclePoint> some_fixed_point(const FixedPointSet& fs) {
    if (fs.full) return CirclePoint{};
    std::optional<CirclePoint> best;
    for (const auto& p : fs.points)
        if (!best || p < *best) best = p;
    for (const auto& [a, b] : fs.arcs)
        if (!best || a < *best) best = a;
    return best;
}

struct RotNumResult {
    enum class Kind { exact, bracket };
    Kind kind = Kind::exact;
    Rational value;  ///< exact value, in [0, 1)
    Rational lo, hi; ///< bracket endpoints (Farey neighbours)
    long depth = 0;

    bool is_exact() const { return kind == Kind::exact; }

    std::string describe() const {
        if (is_exact()) return to_string(value) + " (exact)";
        return "[" + to_string(lo) + ", " + to_string(hi) + "] after " + std::to_string(depth) + " refinements";
    }
};

/// H^n(t) for the normalized lift H (H(0) in [0, 1)).
inline Rational lift_orbit(const PLHomeo& h, Rational t, long n) {
    for (long i = 0; i < n; ++i) t = h.lift(t);
    return t;
}

/// Searches periods q = 1..max_q for a periodic point; if none exists,
/// narrows [0, 1] by `depth` Stern-Brocot steps using the sign of
/// H^q(0) - p at each mediant p/q.
inline RotNumResult rotation_number(const PLHomeo& h, long max_q, long depth) {
    if (max_q < 1 || depth < 1) throw std::invalid_argument("max_q and depth must be positive");
    PLHomeo power;
    for (long q = 1; q <= max_q; ++q) {
        power = compose(h, power);
        const auto x = some_fixed_point(fixed_points(power));
        if (!x) continue;
        const Rational p = lift_orbit(h, x->value(), q) - x->value();
        RotNumResult r;
        r.kind = RotNumResult::Kind::exact;
        r.value = reduce_mod1(p / q).value();
        return r;
    }

    Integer a = 0, b = 1, c = 1, d = 1;
    RotNumResult r;
    r.kind = RotNumResult::Kind::bracket;
    for (long step = 1; step <= depth; ++step) {
        const Integer p = a + c, q = b + d;
        const Rational image = lift_orbit(h, Rational(0), q.get_si());
        const int s = cmp(image, Rational(p));
        if (s == 0) {
            r.kind = RotNumResult::Kind::exact;
            r.value = make_rational(p, q);
            return r;
        }
        if (s > 0) {
            a = p;
            b = q;
        } else {
            c = p;
            d = q;
        }
        r.depth = step;
    }
    r.lo = make_rational(a, b);
    r.hi = make_rational(c, d);
    return r;
}

/// Floating-point copy of a map for long numeric orbits.
class NumericMap {
public:
    explicit NumericMap(const PLHomeo& h) {
        for (const auto& v : h.vertices()) {
            xs_.push_back(to_double(v.x));
            ys_.push_back(to_double(v.y));
        }
        shift_ = std::floor(vertex_lift(0.0));
    }

    double lift(double t) const { return vertex_lift(t) - shift_; }

    double operator()(double t) const {
        const double v = lift(t);
        return v - std::floor(v);
    }

private:
    double vertex_lift(double t) const {
        const double n = std::floor(t - xs_.front());
        const double u = t - n;
        auto it = std::upper_bound(xs_.begin(), xs_.end(), u);
        std::size_t i = static_cast<std::size_t>(it - xs_.begin());
        i = i == 0 ? 0 : std::min(i - 1, xs_.size() - 2);
        const double s = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
        return ys_[i] + s * (u - xs_[i]) + n;
    }

    std::vector<double> xs_, ys_;
    double shift_ = 0.0;
};

/// Empirical semi-conjugacy: the distribution function of the orbit of 0,
/// Phi(x) = #{k < N : h^k(0) in [0, x)} / N.
class SemiConjugacy {
public:
    struct Row {
        double x;
        double phi;
    };

    /// `orbit` need not be sorted; the table samples Phi at j / n_samples.
    SemiConjugacy(std::vector<double> orbit, double rotation, long n_samples)
        : orbit_(std::move(orbit)), rotation_(rotation) {
        std::sort(orbit_.begin(), orbit_.end());
        for (long j = 0; j < n_samples; ++j) {
            const double x = static_cast<double>(j) / static_cast<double>(n_samples);
            table_.push_back({x, (*this)(x)});
        }
    }

    double operator()(double x) const {
        x -= std::floor(x);
        const auto it = std::lower_bound(orbit_.begin(), orbit_.end(), x);
        return static_cast<double>(it - orbit_.begin()) / static_cast<double>(orbit_.size());
    }

    double rotation() const { return rotation_; }
    const std::vector<Row>& table() const { return table_; }

    /// max over table points of the circular distance between Phi(h x) and
    /// Phi(x) + rotation.
    double equivariance_residual(const NumericMap& h) const {
        double worst = 0.0;
        for (const auto& row : table_) {
            double d = (*this)(h(row.x)) - row.phi - rotation_;
            d -= std::round(d);
            worst = std::max(worst, std::abs(d));
        }
        return worst;
    }

private:
    std::vector<double> orbit_;  // sorted
    double rotation_;
    std::vector<Row> table_;
};

inline SemiConjugacy semiconjugacy_table(const PLHomeo& h, long n_samples, long n_iter) {
    if (n_samples < 1 || n_iter < 1) throw std::invalid_argument("n_samples and n_iter must be positive");
    if (!fixed_points(h).empty()) throw std::invalid_argument("semi-conjugacy degenerates: map has a fixed point");
    const NumericMap f(h);
    std::vector<double> orbit;
    orbit.reserve(static_cast<std::size_t>(n_iter));
    double t = 0.0;
    for (long k = 0; k < n_iter; ++k) {
        orbit.push_back(t - std::floor(t));
        t = f.lift(t);
    }
    return SemiConjugacy(std::move(orbit), t / static_cast<double>(n_iter), n_samples);
}

}  // namespace plc
