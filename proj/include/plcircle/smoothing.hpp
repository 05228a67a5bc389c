#pragma once

// Smoothing finitely generated PL groups into rotations.
//
// A conjugator phi makes every phi g phi^-1 breakpoint-free exactly when its
// jumps a = jump_cocycle(phi) satisfy
//
//     a(y) = jump(g, y) * a(g y)      for every generator g and point y.
//
// The equation only involves the orbits of the generators' breakpoints, so
// it is solved on the orbit graph of those points: spanning-tree
// propagation per component, exact cycle checks on the remaining edges, then
// a rational rescaling so the jumps multiply to one and phi exists.

#include "plcircle/circle.hpp"
#include "plcircle/cocycle.hpp"
#include "plcircle/pl_homeo.hpp"
#include "plcircle/rotation_number.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace plc {

struct Generator {
    std::string name;
    PLHomeo map;
};

struct GroupPresentation {
    std::vector<Generator> generators;

    static GroupPresentation from(std::vector<Generator> gens) {
        if (gens.empty()) throw InvariantError("nonempty presentation", "a presentation needs a generator");
        std::set<std::string> names;
        for (const auto& g : gens)
            if (!names.insert(g.name).second) throw InvariantError("unique names", "duplicate generator " + g.name);
        return GroupPresentation{std::move(gens)};
    }
};

struct OrbitEdge {
    std::size_t source;     ///< vertex index
    std::size_t generator;  ///< index into the presentation
    bool inverse = false;   ///< edge follows g^-1 rather than g
    std::size_t target;
    Rational weight;        ///< jump of g (or g^-1) at the source

    friend bool operator==(const OrbitEdge&, const OrbitEdge&) = default;
};

struct OrbitGraph {
    std::vector<CirclePoint> vertices;  ///< discovery order
    std::vector<OrbitEdge> edges;
    std::vector<CirclePoint> seed;
    std::vector<CirclePoint> escaping;  ///< images that did not fit under the cap
    bool closed = true;

    std::optional<std::size_t> index_of(const CirclePoint& p) const {
        auto it = std::find(vertices.begin(), vertices.end(), p);
        if (it == vertices.end()) return std::nullopt;
        return static_cast<std::size_t>(it - vertices.begin());
    }
};

/// |BP(g)| + |BP(g^-1)|: the size of g(A) xor A for the section A picking
/// the trivial coset at every point.
inline long commensuration_defect(const PLHomeo& g) {
    return static_cast<long>(g.breakpoint_count() + inverse(g).breakpoint_count());
}

inline std::vector<CirclePoint> breakpoint_seed(const GroupPresentation& G) {
    std::set<CirclePoint> seed;
    for (const auto& g : G.generators)
        for (const auto& b : g.map.breakpoints()) seed.insert(b);
    return {seed.begin(), seed.end()};
}

/// Breadth-first closure of the generators' breakpoints under the
/// generators and their inverses.
inline OrbitGraph build_orbit_graph(const GroupPresentation& G, std::size_t max_vertices) {
    OrbitGraph graph;
    graph.seed = breakpoint_seed(G);
    if (max_vertices < graph.seed.size()) throw std::invalid_argument("max_vertices smaller than the breakpoint seed");

    std::vector<PLHomeo> inverses;
    for (const auto& g : G.generators) inverses.push_back(inverse(g.map));

    std::map<CirclePoint, std::size_t> index;
    std::set<CirclePoint> escaping;
    std::deque<std::size_t> queue;
    for (const auto& p : graph.seed) {
        index.emplace(p, graph.vertices.size());
        queue.push_back(graph.vertices.size());
        graph.vertices.push_back(p);
    }
    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        const CirclePoint here = graph.vertices[v];
        for (std::size_t gi = 0; gi < G.generators.size(); ++gi) {
            for (const bool inv : {false, true}) {
                const PLHomeo& map = inv ? inverses[gi] : G.generators[gi].map;
                const CirclePoint there = map(here);
                auto it = index.find(there);
                if (it == index.end()) {
                    if (graph.vertices.size() >= max_vertices) {
                        escaping.insert(there);
                        continue;
                    }
                    it = index.emplace(there, graph.vertices.size()).first;
                    queue.push_back(graph.vertices.size());
                    graph.vertices.push_back(there);
                }
                graph.edges.push_back({v, gi, inv, it->second, jump(map, here)});
            }
        }
    }
    graph.escaping.assign(escaping.begin(), escaping.end());
    graph.closed = escaping.empty();
    return graph;
}

/// Jumps of the conjugator to synthesize; values of 1 are not stored.
using JumpAssignment = FiniteVector;

struct Obstruction {
    std::vector<OrbitEdge> cycle;  ///< closed walk in the orbit graph
    Rational expected{1};
    Rational found;                ///< product of the cycle's weights
};

struct CoboundarySolution {
    enum class Kind { solved, obstruction, infeasible };
    Kind kind = Kind::solved;
    JumpAssignment assignment;
    Obstruction obstruction;
    std::string detail;  ///< diagnostic for the infeasible case
};

namespace detail {

// Exact g-th root of a positive rational, if it exists.
inline std::optional<Rational> exact_root(const Rational& q, unsigned long g) {
    Integer rn, rd;
    const bool en = mpz_root(rn.get_mpz_t(), q.get_num_mpz_t(), g) != 0;
    const bool ed = mpz_root(rd.get_mpz_t(), q.get_den_mpz_t(), g) != 0;
    if (!en || !ed) return std::nullopt;
    return make_rational(rn, rd);
}

inline Rational rational_pow(const Rational& base, long e) {
    const Rational b = e < 0 ? Rational(1 / base) : base;
    const unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), k);
    mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), k);
    return make_rational(num, den);
}

}  // namespace detail

/// Solves a(y) = w * a(t) on every edge y -> t of weight w.
///
/// An inconsistent cycle is reported as an obstruction; this check is
/// sound on a truncated graph too, since every edge it uses is genuine. A
/// truncated graph without an obstruction is rejected. When the per-component
/// solutions cannot be rescaled to a product-one assignment with rational
/// factors the result is `infeasible`.
inline CoboundarySolution solve_coboundary(const OrbitGraph& graph) {
    const std::size_t n = graph.vertices.size();
    std::vector<std::vector<std::size_t>> out_edges(n);
    for (std::size_t e = 0; e < graph.edges.size(); ++e) out_edges[graph.edges[e].source].push_back(e);

    std::vector<std::optional<Rational>> value(n);
    std::vector<std::optional<std::size_t>> parent_edge(n);
    std::vector<std::size_t> component(n, 0), depth(n, 0);
    std::vector<std::vector<std::size_t>> components;

    // Roots are taken in increasing circle order for determinism.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return graph.vertices[a] < graph.vertices[b]; });
    for (const std::size_t root : order) {
        if (value[root]) continue;
        const std::size_t c = components.size();
        components.emplace_back();
        value[root] = Rational(1);
        std::deque<std::size_t> queue{root};
        while (!queue.empty()) {
            const std::size_t u = queue.front();
            queue.pop_front();
            component[u] = c;
            components[c].push_back(u);
            for (const std::size_t e : out_edges[u]) {
                const OrbitEdge& edge = graph.edges[e];
                if (value[edge.target]) continue;
                value[edge.target] = *value[u] / edge.weight;
                parent_edge[edge.target] = e;
                depth[edge.target] = depth[u] + 1;
                queue.push_back(edge.target);
            }
        }
    }

    auto reverse_of = [&](std::size_t e) {
        const OrbitEdge& edge = graph.edges[e];
        for (const std::size_t r : out_edges[edge.target]) {
            const OrbitEdge& back = graph.edges[r];
            if (back.target == edge.source && back.generator == edge.generator && back.inverse != edge.inverse)
                return r;
        }
        throw std::logic_error("orbit graph is missing an inverse edge");
    };

    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
        const OrbitEdge& edge = graph.edges[e];
        if (*value[edge.source] == edge.weight * *value[edge.target]) continue;

        // Cycle: lca -> source along the tree, the edge, target -> lca back up.
        std::vector<std::size_t> down, up;
        std::size_t a = edge.source, b = edge.target;
        while (depth[a] > depth[b]) {
            down.push_back(*parent_edge[a]);
            a = graph.edges[*parent_edge[a]].source;
        }
        while (depth[b] > depth[a]) {
            up.push_back(reverse_of(*parent_edge[b]));
            b = graph.edges[*parent_edge[b]].source;
        }
        while (a != b) {
            down.push_back(*parent_edge[a]);
            a = graph.edges[*parent_edge[a]].source;
            up.push_back(reverse_of(*parent_edge[b]));
            b = graph.edges[*parent_edge[b]].source;
        }
        CoboundarySolution out;
        out.kind = CoboundarySolution::Kind::obstruction;
        std::reverse(down.begin(), down.end());
        for (const std::size_t d : down) out.obstruction.cycle.push_back(graph.edges[d]);
        out.obstruction.cycle.push_back(edge);
        for (const std::size_t u : up) out.obstruction.cycle.push_back(graph.edges[u]);
        out.obstruction.found = 1;
        for (const auto& c : out.obstruction.cycle) out.obstruction.found *= c.weight;
        return out;
    }

    if (!graph.closed) throw std::invalid_argument("solve_coboundary: orbit graph is truncated");

    // Product-one normalization. Scaling component C by t multiplies the
    // total product by t^|C|, so we need prod t_C^|C| = 1 / P. Over the
    // rationals this is solvable iff 1/P is a g-th power, g = gcd |C|.
    CoboundarySolution out;
    if (components.empty()) return out;
    Rational total(1);
    for (std::size_t v = 0; v < n; ++v) total *= *value[v];
    long g = 0;
    std::vector<long> coeff(components.size(), 0);
    for (std::size_t c = 0; c < components.size(); ++c) {
        // Extended gcd folded over the sizes keeps g = sum coeff_c |C|.
        const long size = static_cast<long>(components[c].size());
        if (c == 0) {
            g = size;
            coeff[0] = 1;
            continue;
        }
        long old_r = g, r = size, old_s = 1, s = 0, old_t = 0, t = 1;
        while (r != 0) {
            const long q = old_r / r;
            std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
            std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
            std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
        }
        for (std::size_t k = 0; k < c; ++k) coeff[k] *= old_s;
        coeff[c] = old_t;
        g = old_r;
    }
    const auto root = detail::exact_root(1 / total, static_cast<unsigned long>(g));
    if (!root) {
        out.kind = CoboundarySolution::Kind::infeasible;
        out.detail = "component products " + to_string(total) + " admit no rational root of order " +
                     std::to_string(g);
        return out;
    }
    for (std::size_t c = 0; c < components.size(); ++c) {
        const Rational scale = detail::rational_pow(*root, coeff[c]);
        for (const std::size_t v : components[c]) out.assignment.set(graph.vertices[v], *value[v] * scale);
    }
    return out;
}

/// The PL map whose jumps are exactly `a`, fixing the smallest support
/// point.
inline PLHomeo synthesize_conjugator(const JumpAssignment& a) {
    if (a.empty()) return PLHomeo::identity();
    if (a.product() != 1)
        throw InvariantError("product one", "jumps multiply to " + to_string(a.product()) +
                                                ", no PL homeomorphism has these jumps");
    std::vector<Rational> starts, slopes;
    Rational slope(1);
    for (const auto& [p, j] : a.entries()) {
        if (!starts.empty()) slope *= j;
        starts.push_back(p.value());
        slopes.push_back(slope);
    }
    Rational rise(0);
    for (std::size_t i = 0; i < starts.size(); ++i) {
        const Rational next = i + 1 < starts.size() ? starts[i + 1] : starts[0] + 1;
        rise += slopes[i] * (next - starts[i]);
    }
    for (auto& s : slopes) s /= rise;
    return PLHomeo::from_pieces(starts, slopes, starts[0]);
}

/// Looks for a finite orbit shared by the whole group among periodic points
/// of each generator with period at most `max_period`; orbits larger than
/// `max_period` are not followed.
inline std::optional<std::vector<CirclePoint>> detect_finite_orbit(const GroupPresentation& G, long max_period) {
    if (max_period < 1) throw std::invalid_argument("max_period must be positive");
    std::set<CirclePoint> candidates;
    for (const auto& g : G.generators) {
        PLHomeo power;
        for (long q = 1; q <= max_period; ++q) {
            power = compose(g.map, power);
            const FixedPointSet fs = fixed_points(power);
            if (fs.full) candidates.insert(CirclePoint{});
            for (const auto& p : fs.points) candidates.insert(p);
            for (const auto& [lo, hi] : fs.arcs) {
                candidates.insert(lo);
                candidates.insert(hi);
                Rational len = hi.value() - lo.value();
                if (sgn(len) <= 0) len += 1;
                candidates.insert(reduce_mod1(lo.value() + len / 2));
            }
        }
    }
    std::vector<PLHomeo> maps;
    for (const auto& g : G.generators) {
        maps.push_back(g.map);
        maps.push_back(inverse(g.map));
    }
    for (const auto& start : candidates) {
        std::set<CirclePoint> orbit{start};
        std::deque<CirclePoint> queue{start};
        bool bounded = true;
        while (!queue.empty() && bounded) {
            const CirclePoint p = queue.front();
            queue.pop_front();
            for (const auto& m : maps) {
                const CirclePoint q = m(p);
                if (orbit.insert(q).second) {
                    if (static_cast<long>(orbit.size()) > max_period) {
                        bounded = false;
                        break;
                    }
                    queue.push_back(q);
                }
            }
        }
        if (bounded) return std::vector<CirclePoint>(orbit.begin(), orbit.end());
    }
    return std::nullopt;
}

struct SmoothingOutcome {
    enum class Kind { success, finite_orbit, obstruction, truncated, infeasible };
    Kind kind = Kind::success;
    PLHomeo phi;
    std::vector<PLHomeo> conjugated;
    std::vector<CirclePoint> orbit;     ///< finite_orbit
    Obstruction obstruction;            ///< obstruction
    std::vector<CirclePoint> escaping;  ///< truncated
    std::string detail;                 ///< infeasible
    OrbitGraph graph;                   ///< the graph the solve ran on
};

inline const char* kind_name(SmoothingOutcome::Kind k) {
    switch (k) {
        case SmoothingOutcome::Kind::success: return "success";
        case SmoothingOutcome::Kind::finite_orbit: return "finite_orbit";
        case SmoothingOutcome::Kind::obstruction: return "obstruction";
        case SmoothingOutcome::Kind::truncated: return "truncated";
        case SmoothingOutcome::Kind::infeasible: return "infeasible";
    }
    return "unknown";
}

/// Full pipeline: orbit graph, coboundary, conjugator, conjugation. When
/// `finite_orbit_budget` is given and smoothing fails, a finite orbit found
/// within that budget is reported instead of the failure.
inline SmoothingOutcome smooth_group(const GroupPresentation& G, std::size_t max_vertices,
                                     std::optional<long> finite_orbit_budget = std::nullopt) {
    SmoothingOutcome out;
    // Grow the cap geometrically: an obstruction on a partial graph is
    // already conclusive, so there is no need to pay for the full cap.
    const std::size_t seed_size = breakpoint_seed(G).size();
    if (max_vertices < seed_size) throw std::invalid_argument("max_vertices smaller than the breakpoint seed");
    for (std::size_t cap = std::min(max_vertices, std::max<std::size_t>(64, seed_size));; cap = std::min(max_vertices, 4 * cap)) {
        out.graph = build_orbit_graph(G, cap);
        if (out.graph.closed || cap == max_vertices) break;
        if (solve_coboundary(out.graph).kind == CoboundarySolution::Kind::obstruction) break;
    }
    const OrbitGraph& graph = out.graph;

    auto fall_back = [&](SmoothingOutcome failed) {
        if (finite_orbit_budget) {
            if (auto orbit = detect_finite_orbit(G, *finite_orbit_budget)) {
                failed.kind = SmoothingOutcome::Kind::finite_orbit;
                failed.orbit = std::move(*orbit);
            }
        }
        return failed;
    };

    CoboundarySolution sol;
    try {
        sol = solve_coboundary(graph);
    } catch (const std::invalid_argument&) {
        out.kind = SmoothingOutcome::Kind::truncated;
        out.escaping = graph.escaping;
        return fall_back(std::move(out));
    }
    if (sol.kind == CoboundarySolution::Kind::obstruction) {
        out.kind = SmoothingOutcome::Kind::obstruction;
        out.obstruction = std::move(sol.obstruction);
        return fall_back(std::move(out));
    }
    if (sol.kind == CoboundarySolution::Kind::infeasible) {
        out.kind = SmoothingOutcome::Kind::infeasible;
        out.detail = std::move(sol.detail);
        return fall_back(std::move(out));
    }

    out.phi = synthesize_conjugator(sol.assignment);
    for (const auto& g : G.generators) {
        PLHomeo c = conjugate(out.phi, g.map);
        if (!c.is_rotation())
            throw std::logic_error("smooth_group: conjugate of " + g.name + " kept " +
                                   std::to_string(c.breakpoint_count()) + " breakpoints");
        out.conjugated.push_back(std::move(c));
    }
    return out;
}

}  // namespace plc
