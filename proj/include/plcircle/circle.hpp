#pragma once

// Exact arithmetic on the circle R/Z: rationals, points, open arcs and
// cyclic order. Nothing in here touches floating point except the explicit
// to_double / log_ratio helpers used by numeric reports.

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace plc {

using Rational = mpq_class;
using Integer = mpz_class;

/// Raised whenever an input violates a structural invariant. `invariant()`
/// names the violated rule so front ends can print a precise diagnostic.
class InvariantError : public std::invalid_argument {
public:
    InvariantError(std::string invariant, const std::string& detail)
        : std::invalid_argument(invariant + ": " + detail), invariant_(std::move(invariant)) {}

    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::domain_error("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw std::domain_error("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Canonical "p/q" text (q > 0, lowest terms); integers print as "p/1" only
/// when `always_fraction` is set.
inline std::string to_string(const Rational& q, bool always_fraction = true) {
    std::string s = q.get_num().get_str();
    if (always_fraction || q.get_den() != 1) s += "/" + q.get_den().get_str();
    return s;
}

/// Parses "p/q", "p" or "-p/q". Whitespace is not allowed.
inline Rational parse_rational(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty rational");
    auto valid_int = [](std::string_view s, bool allow_sign) {
        if (s.empty()) return false;
        std::size_t i = 0;
        if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    const auto slash = text.find('/');
    std::string num(text.substr(0, slash));
    std::string den = slash == std::string_view::npos ? "1" : std::string(text.substr(slash + 1));
    if (!valid_int(num, true) || !valid_int(den, false))
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    if (num[0] == '+') num.erase(0, 1);
    Integer n(num, 10), d(den, 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return make_rational(n, d);
}

inline Integer floor_of(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline Integer ceil_of(const Rational& q) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline double to_double(const Rational& q) { return q.get_d(); }

/// Natural log of a positive rational, accurate even when numerator and
/// denominator overflow a double.
inline double log_ratio(const Rational& q) {
    if (sgn(q) <= 0) throw std::domain_error("log of non-positive rational");
    auto log_z = [](const Integer& z) {
        long exp = 0;
        const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
        return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
    };
    return log_z(q.get_num()) - log_z(q.get_den());
}

/// A point of R/Z, stored as the representative in [0, 1) in lowest terms.
class CirclePoint {
public:
    CirclePoint() = default;

    /// Reduces any rational modulo 1.
    static CirclePoint reduce(const Rational& q) {
        CirclePoint p;
        p.value_ = q - Rational(floor_of(q));
        p.value_.canonicalize();
        return p;
    }

    const Rational& value() const noexcept { return value_; }

    friend bool operator==(const CirclePoint& a, const CirclePoint& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const CirclePoint& a, const CirclePoint& b) {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const CirclePoint& p) {
        return os << to_string(p.value_, false);
    }

private:
    Rational value_{0};
};

inline CirclePoint reduce_mod1(const Rational& q) { return CirclePoint::reduce(q); }

/// Positive distance travelled from `from` to `to`, in [0, 1).
inline Rational forward_distance(const CirclePoint& from, const CirclePoint& to) {
    Rational d = to.value() - from.value();
    if (sgn(d) < 0) d += 1;
    return d;
}

/// Positively oriented open arc. With `full` set it is the whole circle
/// minus nothing; otherwise start != end.
struct Arc {
    CirclePoint start;
    CirclePoint end;
    bool full = false;

    static Arc full_circle() { return Arc{CirclePoint{}, CirclePoint{}, true}; }

    static Arc between(const CirclePoint& a, const CirclePoint& b) {
        if (a == b) throw InvariantError("arc", "degenerate arc needs the full-circle flag");
        return Arc{a, b, false};
    }

    /// Length in (0, 1]; the full circle and an arc from a point back to
    /// itself both have length 1.
    Rational length() const {
        if (full || start == end) return Rational(1);
        return forward_distance(start, end);
    }

    friend bool operator==(const Arc&, const Arc&) = default;
};

/// True iff `p` lies strictly inside the arc.
inline bool arc_contains(const Arc& a, const CirclePoint& p) {
    if (a.full) return true;
    if (a.start == a.end) return p != a.start;
    const Rational to_p = forward_distance(a.start, p);
    return sgn(to_p) > 0 && to_p < forward_distance(a.start, a.end);
}

/// True iff `b` lies in the open positive arc from `a` to `c`.
inline bool cyclic_between(const CirclePoint& a, const CirclePoint& b, const CirclePoint& c) {
    if (a == b || b == c || a == c) throw std::invalid_argument("cyclic_between needs distinct points");
    return forward_distance(a, b) < forward_distance(a, c);
}

}  // namespace plc

template <>
struct std::hash<plc::CirclePoint> {
    std::size_t operator()(const plc::CirclePoint& p) const noexcept {
        const auto h1 = mpz_get_ui(p.value().get_num_mpz_t());
        const auto h2 = mpz_get_ui(p.value().get_den_mpz_t());
        return std::hash<unsigned long>{}(h1 * 1000003UL ^ h2);
    }
};
