#pragma once

// JSON encodings for elements, group presentations, symbolic sets and
// pipeline outcomes. Rationals are always the string "p/q" in lowest terms.
//
//   element:  {"vertices": [["p/q", "r/s"], ...]}   lift vertices
//             {"rotation": "p/q"}
//             {"exotic": {"A": "p/q", "lambda": "r/s"}}
//   group:    {"generators": {"name": <element>, ...}}
//   set:      {"clusters": [<node>, ...]}
//             node = {"type": "leaf", "point": "p/q"}
//                  | {"type": "limit", "apex": "p/q", "direction": "left"|"right",
//                     "ratio": "p/q", "child": [<node>, ...]}

#include "plcircle/cantor_bendixson.hpp"
#include "plcircle/circle.hpp"
#include "plcircle/cocycle.hpp"
#include "plcircle/pl_homeo.hpp"
#include "plcircle/rotation_number.hpp"
#include "plcircle/smoothing.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace plc {

using Json = nlohmann::ordered_json;

/// Malformed input: bad JSON syntax or a missing/mistyped field. `where`
/// is a JSON-pointer-like path or a "line N, column M" location.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

/// Shortest round-trip decimal text, independent of the C locale.
inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw std::runtime_error("cannot format double");
    return std::string(buf.data(), end);
}

inline Json to_json(const Rational& q) { return to_string(q); }
inline Json to_json(const CirclePoint& p) { return to_string(p.value()); }

inline Rational rational_from_json(const Json& j, const std::string& where) {
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ParseError(where, e.what());
        }
    }
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw ParseError(where, "expected a rational string \"p/q\"");
}

inline const Json& require(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw ParseError(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(where, std::string("missing field '") + key + "'");
    return *it;
}

// ---- elements -------------------------------------------------------------

inline PLHomeo element_from_json(const Json& j, const std::string& where = "") {
    if (!j.is_object()) throw ParseError(where.empty() ? "/" : where, "element must be an object");
    if (j.contains("rotation")) return rotation(rational_from_json(j["rotation"], where + "/rotation"));
    if (j.contains("exotic")) {
        const Json& e = j["exotic"];
        const std::string w = where + "/exotic";
        return exotic_element({rational_from_json(require(e, "A", w), w + "/A"),
                               rational_from_json(require(e, "lambda", w), w + "/lambda")});
    }
    if (j.contains("vertices")) {
        const Json& arr = j["vertices"];
        const std::string w = where + "/vertices";
        if (!arr.is_array()) throw ParseError(w, "expected an array of [x, y] pairs");
        std::vector<Vertex> vs;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string wi = w + "/" + std::to_string(i);
            if (!arr[i].is_array() || arr[i].size() != 2) throw ParseError(wi, "expected a pair [x, y]");
            vs.push_back({rational_from_json(arr[i][0], wi + "/0"), rational_from_json(arr[i][1], wi + "/1")});
        }
        return PLHomeo::from_vertices(vs);
    }
    throw ParseError(where.empty() ? "/" : where, "element needs one of 'vertices', 'rotation', 'exotic'");
}

inline Json element_to_json(const PLHomeo& h) {
    if (h.is_rotation()) return Json{{"rotation", to_string(h.vertices()[0].y)}};
    Json vs = Json::array();
    for (const auto& v : h.vertices()) vs.push_back(Json::array({to_string(v.x), to_string(v.y)}));
    return Json{{"vertices", vs}};
}

inline Json vector_to_json(const FiniteVector& v) {
    Json out = Json::object();
    for (const auto& [p, value] : v.entries()) out[to_string(p.value())] = to_string(value);
    return out;
}

inline FiniteVector vector_from_json(const Json& j, const std::string& where = "") {
    if (!j.is_object()) throw ParseError(where.empty() ? "/" : where, "vector must be an object of point: value");
    FiniteVector v;
    for (const auto& [key, value] : j.items()) {
        Rational p;
        try {
            p = parse_rational(key);
        } catch (const std::invalid_argument& e) {
            throw ParseError(where + "/" + key, e.what());
        }
        v.set(reduce_mod1(p), rational_from_json(value, where + "/" + key));
    }
    return v;
}

// ---- groups ---------------------------------------------------------------

inline GroupPresentation group_from_json(const Json& j) {
    const Json& gens = require(j, "generators", "/");
    if (!gens.is_object()) throw ParseError("/generators", "expected an object of named elements");
    std::vector<Generator> out;
    for (const auto& [name, elem] : gens.items()) out.push_back({name, element_from_json(elem, "/generators/" + name)});
    return GroupPresentation::from(std::move(out));
}

inline Json group_to_json(const GroupPresentation& G) {
    Json gens = Json::object();
    for (const auto& g : G.generators) gens[g.name] = element_to_json(g.map);
    return Json{{"generators", gens}};
}

// ---- symbolic sets --------------------------------------------------------

inline std::vector<CBNode> nodes_from_json(const Json& arr, const std::string& where) {
    if (!arr.is_array()) throw ParseError(where, "expected an array of nodes");
    std::vector<CBNode> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string w = where + "/" + std::to_string(i);
        const Json& n = arr[i];
        const Json& type = require(n, "type", w);
        if (type == "leaf") {
            out.push_back(CBNode::leaf(reduce_mod1(rational_from_json(require(n, "point", w), w + "/point"))));
        } else if (type == "limit") {
            const Json& dir = require(n, "direction", w);
            if (dir != "left" && dir != "right") throw ParseError(w + "/direction", "expected \"left\" or \"right\"");
            const Rational apex = rational_from_json(require(n, "apex", w), w + "/apex");
            if (sgn(apex) < 0 || apex >= 1) throw ParseError(w + "/apex", "apex must lie in [0,1)");
            out.push_back(CBNode::limit(CirclePoint::reduce(apex), nodes_from_json(require(n, "child", w), w + "/child"),
                                        dir == "left" ? Side::left : Side::right,
                                        rational_from_json(require(n, "ratio", w), w + "/ratio")));
        } else {
            throw ParseError(w + "/type", "expected \"leaf\" or \"limit\"");
        }
    }
    return out;
}

inline SymbolicSet set_from_json(const Json& j) {
    SymbolicSet s{nodes_from_json(require(j, "clusters", "/"), "/clusters")};
    validate(s);
    return s;
}

inline Json nodes_to_json(const std::vector<CBNode>& nodes) {
    Json arr = Json::array();
    for (const auto& n : nodes) {
        if (n.is_leaf()) {
            arr.push_back(Json{{"type", "leaf"}, {"point", to_string(n.point.value())}});
        } else {
            arr.push_back(Json{{"type", "limit"},
                               {"apex", to_string(n.point.value())},
                               {"direction", n.side == Side::left ? "left" : "right"},
                               {"ratio", to_string(n.ratio)},
                               {"child", nodes_to_json(n.child)}});
        }
    }
    return arr;
}

inline Json set_to_json(const SymbolicSet& s) { return Json{{"clusters", nodes_to_json(s.clusters)}}; }

// ---- reports --------------------------------------------------------------

inline Json growth_params_to_json(const GrowthParams& gp) {
    Json superset = Json::array();
    for (const auto& s : gp.jump_value_superset) superset.push_back(to_string(s));
    return Json{{"component", Json::array({to_string(gp.component.start.value()), to_string(gp.component.end.value())})},
                {"used_inverse", gp.used_inverse},
                {"right_slope_x0", to_string(gp.right_slope_x0)},
                {"left_slope_x1", to_string(gp.left_slope_x1)},
                {"c0", gp.c0},
                {"c1", gp.c1},
                {"mu", gp.mu},
                {"beta", gp.beta},
                {"jump_value_superset", superset}};
}

inline Json edge_to_json(const OrbitEdge& e, const OrbitGraph& graph, const GroupPresentation& G) {
    return Json{{"source", to_string(graph.vertices[e.source].value())},
                {"generator", G.generators[e.generator].name + (e.inverse ? "^-1" : "")},
                {"target", to_string(graph.vertices[e.target].value())},
                {"weight", to_string(e.weight)}};
}

inline Json outcome_to_json(const SmoothingOutcome& o, const GroupPresentation& G) {
    const OrbitGraph& graph = o.graph;
    Json out{{"kind", kind_name(o.kind)}};
    switch (o.kind) {
        case SmoothingOutcome::Kind::success: {
            out["phi"] = element_to_json(o.phi);
            Json conj = Json::object();
            for (std::size_t i = 0; i < o.conjugated.size(); ++i)
                conj[G.generators[i].name] = element_to_json(o.conjugated[i]);
            out["conjugated"] = conj;
            break;
        }
        case SmoothingOutcome::Kind::finite_orbit: {
            Json pts = Json::array();
            for (const auto& p : o.orbit) pts.push_back(to_string(p.value()));
            out["orbit"] = pts;
            break;
        }
        case SmoothingOutcome::Kind::obstruction: {
            Json cyc = Json::array();
            for (const auto& e : o.obstruction.cycle) cyc.push_back(edge_to_json(e, graph, G));
            out["cycle"] = cyc;
            out["expected"] = to_string(o.obstruction.expected);
            out["found"] = to_string(o.obstruction.found);
            break;
        }
        case SmoothingOutcome::Kind::truncated: {
            Json pts = Json::array();
            for (const auto& p : o.escaping) pts.push_back(to_string(p.value()));
            out["escaping"] = pts;
            break;
        }
        case SmoothingOutcome::Kind::infeasible: out["detail"] = o.detail; break;
    }
    return out;
}

// ---- files ----------------------------------------------------------------

inline Json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(source + ": line " + std::to_string(line) + ", column " + std::to_string(col),
                         "malformed JSON");
    }
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

}  // namespace plc
