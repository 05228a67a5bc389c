#pragma once

// Countable compact subsets of the circle given by finite trees, with their
// Cantor-Bendixson derivatives and (finite) ranks.
//
// A limit node realizes its apex together with copies of its child set
// squeezed into the annuli (r^(n+1), r^n] on one side of the apex, n >= 1:
// the child point c in [0, 1) lands at apex +/- r^n (r + (1 - r) c).

#include "plcircle/circle.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace plc {

enum class Side { left, right };

struct CBNode {
    enum class Kind { leaf, limit };
    Kind kind = Kind::leaf;
    CirclePoint point;            ///< leaf point or limit apex
    std::vector<CBNode> child;    ///< limit only; nonempty
    Side side = Side::right;
    Rational ratio{1, 2};

    static CBNode leaf(const CirclePoint& p) { return CBNode{Kind::leaf, p, {}, Side::right, Rational(1, 2)}; }

    static CBNode limit(const CirclePoint& apex, std::vector<CBNode> child, Side side, const Rational& ratio) {
        return CBNode{Kind::limit, apex, std::move(child), side, ratio};
    }

    bool is_leaf() const noexcept { return kind == Kind::leaf; }

    friend bool operator==(const CBNode&, const CBNode&) = default;
};

struct SymbolicSet {
    std::vector<CBNode> clusters;

    bool empty() const noexcept { return clusters.empty(); }
    friend bool operator==(const SymbolicSet&, const SymbolicSet&) = default;
};

struct CBRank {
    std::size_t rank = 0;
    std::size_t top_finite_set_size = 0;

    friend bool operator==(const CBRank&, const CBRank&) = default;
};

namespace detail {

struct Hull {
    Rational lo, hi;  // closed, inside [0, 1)
};

inline Hull hull_of(const CBNode& node) {
    const Rational& p = node.point.value();
    if (node.is_leaf()) return {p, p};
    if (node.side == Side::right) return {p, p + node.ratio};
    return {p - node.ratio, p};
}

inline void validate_nodes(const std::vector<CBNode>& nodes, const std::string& where) {
    std::vector<Hull> hulls;
    for (const auto& node : nodes) {
        if (!node.is_leaf()) {
            if (!(sgn(node.ratio) > 0 && node.ratio < 1))
                throw InvariantError("ratio in (0,1)", where + ": ratio " + to_string(node.ratio));
            if (node.child.empty()) throw InvariantError("nonempty child", where + ": limit node without child");
            const Hull h = hull_of(node);
            if (sgn(h.lo) < 0 || h.hi >= 1)
                throw InvariantError("no wrap", where + ": copies around apex " + to_string(node.point.value()) +
                                                    " leave [0,1)");
            validate_nodes(node.child, where + "/child");
        }
        hulls.push_back(hull_of(node));
    }
    std::sort(hulls.begin(), hulls.end(), [](const Hull& a, const Hull& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < hulls.size(); ++i)
        if (!(hulls[i - 1].hi < hulls[i].lo))
            throw InvariantError("disjoint clusters", where + ": clusters overlap near " + to_string(hulls[i].lo));
}

inline void realize_into(const std::vector<CBNode>& nodes, std::size_t depth, std::vector<CirclePoint>& out) {
    for (const auto& node : nodes) {
        out.push_back(node.point);
        if (node.is_leaf()) continue;
        std::vector<CirclePoint> child;
        realize_into(node.child, depth, child);
        const Rational& r = node.ratio;
        Rational scale = r;  // r^n
        for (std::size_t n = 1; n <= depth; ++n, scale *= r) {
            for (const auto& c : child) {
                const Rational offset = scale * (r + (1 - r) * c.value());
                out.push_back(reduce_mod1(node.side == Side::right ? Rational(node.point.value() + offset)
                                                                   : Rational(node.point.value() - offset)));
            }
        }
    }
}

inline std::vector<CBNode> derive(const std::vector<CBNode>& nodes) {
    std::vector<CBNode> out;
    for (const auto& node : nodes) {
        if (node.is_leaf()) continue;
        std::vector<CBNode> child = derive(node.child);
        if (child.empty())
            out.push_back(CBNode::leaf(node.point));
        else
            out.push_back(CBNode::limit(node.point, std::move(child), node.side, node.ratio));
    }
    return out;
}

inline std::size_t structural_rank(const std::vector<CBNode>& nodes) {
    std::size_t best = 0;
    for (const auto& node : nodes)
        best = std::max(best, node.is_leaf() ? std::size_t{1} : 1 + structural_rank(node.child));
    return best;
}

}  // namespace detail

/// Throws InvariantError unless ratios lie in (0, 1), limit children are
/// nonempty, every limit's copies stay inside [0, 1) and sibling clusters
/// have disjoint hulls. Disjoint hulls make all realized points distinct at
/// every depth.
inline void validate(const SymbolicSet& s) { detail::validate_nodes(s.clusters, "set"); }

/// Points of the set up to `depth` copies at every limit node, sorted.
inline std::vector<CirclePoint> realize(const SymbolicSet& s, std::size_t depth) {
    std::vector<CirclePoint> out;
    detail::realize_into(s.clusters, depth, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Accumulation points: leaves vanish, limit nodes keep their apex and
/// derive their child.
inline SymbolicSet cb_derivative(const SymbolicSet& s) { return SymbolicSet{detail::derive(s.clusters)}; }

/// S, S', S'', ... up to and including the last nonempty derivative.
inline std::vector<SymbolicSet> cb_chain(const SymbolicSet& s) {
    std::vector<SymbolicSet> chain;
    for (SymbolicSet cur = s; !cur.empty(); cur = cb_derivative(cur)) chain.push_back(cur);
    return chain;
}

inline CBRank cb_rank(const SymbolicSet& s) {
    const auto chain = cb_chain(s);
    CBRank r;
    r.rank = chain.size();
    if (!chain.empty()) r.top_finite_set_size = chain.back().clusters.size();
    return r;
}

/// 1 + the deepest limit nesting; agrees with cb_rank.
inline std::size_t structural_rank(const SymbolicSet& s) { return detail::structural_rank(s.clusters); }

}  // namespace plc
