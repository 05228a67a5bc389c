#pragma once

// Batch front end shared by the `plcircle` tool and the tests. `run` never
// touches global state, so identical configs give byte-identical output.
//
// Exit status: 0 success, 1 a mathematical outcome other than success
// (obstruction, truncated orbit graph, infeasible normalization, finite
// orbit), 2 bad input.

#include "plcircle/cantor_bendixson.hpp"
#include "plcircle/cocycle.hpp"
#include "plcircle/io.hpp"
#include "plcircle/pl_homeo.hpp"
#include "plcircle/rotation_number.hpp"
#include "plcircle/smoothing.hpp"

#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace plc::cli {

enum class Format { table, csv, json };

struct ExperimentConfig {
    std::string command;
    std::vector<std::string> inputs;
    long N = 20;
    long max_vertices = 10000;
    long max_q = 30;
    long depth = 20;
    long max_period = 0;  ///< finite-orbit search budget for `smooth`; 0 disables
    std::uint64_t seed = 1;
    long k = 4;
    long denom = 64;
    std::string point = "0";
    std::string A = "4";
    std::string lambda = "2";
    long samples = 0;  ///< rotnum: semi-conjugacy table rows; 0 disables
    long iterations = 10000;
    Format format = Format::table;
};

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> names{"eval",   "compose",  "show",  "orbit-norms",   "breakpoint-growth",
                                                "exotic", "rotnum",   "smooth", "cb-rank",      "commensuration",
                                                "random"};
    return names;
}

namespace detail {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void need_inputs(const ExperimentConfig& c, std::size_t n) {
    if (c.inputs.size() != n)
        throw UsageError(c.command + " expects " + std::to_string(n) + " input file(s), got " +
                         std::to_string(c.inputs.size()));
}

inline void need_positive(long v, const char* name) {
    if (v < 1) throw UsageError(std::string(name) + " must be positive");
}

inline PLHomeo load_element(const std::string& path) { return element_from_json(load_json_file(path)); }

inline void print_json(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

inline std::string csv_double(double v) { return format_double(v); }

inline void print_element_table(std::ostream& out, const PLHomeo& h) {
    out << "pieces " << h.piece_count() << ", breakpoints " << h.breakpoint_count() << "\n";
    out << "lift vertices:\n";
    for (const auto& v : h.vertices()) out << "  (" << to_string(v.x) << ", " << to_string(v.y) << ")\n";
    out << "slopes:";
    for (std::size_t i = 0; i < h.piece_count(); ++i) out << " " << to_string(h.slope(i));
    out << "\n";
}

inline int cmd_eval(const ExperimentConfig& c, std::ostream& out) {
    need_inputs(c, 1);
    const PLHomeo h = load_element(c.inputs[0]);
    Rational p;
    try {
        p = parse_rational(c.point);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--point: ") + e.what());
    }
    const CirclePoint x = reduce_mod1(p), y = h(x);
    const auto [left, right] = left_right_slopes(h, x);
    if (c.format == Format::json) {
        print_json(out, Json{{"point", to_string(x.value())},
                             {"image", to_string(y.value())},
                             {"left_slope", to_string(left)},
                             {"right_slope", to_string(right)}});
    } else if (c.format == Format::csv) {
        out << "point,image,left_slope,right_slope\n"
            << to_string(x.value()) << "," << to_string(y.value()) << "," << to_string(left) << ","
            << to_string(right) << "\n";
    } else {
        out << "h(" << to_string(x.value()) << ") = " << to_string(y.value()) << "  (D- = " << to_string(left)
            << ", D+ = " << to_string(right) << ")\n";
    }
    return 0;
}

inline int cmd_compose(const ExperimentConfig& c, std::ostream& out) {
    if (c.inputs.size() < 2) throw UsageError("compose expects at least two input files");
    // Files compose right to left like the notation g o h.
    PLHomeo result;
    for (auto it = c.inputs.rbegin(); it != c.inputs.rend(); ++it) result = compose(load_element(*it), result);
    if (c.format == Format::table)
        print_element_table(out, result);
    else
        print_json(out, element_to_json(result));
    return 0;
}

inline int cmd_show(const ExperimentConfig& c, std::ostream& out) {
    need_inputs(c, 1);
    const PLHomeo h = load_element(c.inputs[0]);
    const JumpVector jumps = jump_cocycle(h);
    if (c.format == Format::json) {
        Json bps = Json::array();
        for (const auto& b : h.breakpoints()) bps.push_back(to_string(b.value()));
        print_json(out, Json{{"element", element_to_json(h)},
                             {"breakpoints", bps},
                             {"jumps", vector_to_json(jumps)},
                             {"commensuration_defect", commensuration_defect(h)}});
    } else if (c.format == Format::csv) {
        out << "breakpoint,left_slope,right_slope,jump\n";
        for (const auto& b : h.breakpoints()) {
            const auto [l, r] = left_right_slopes(h, b);
            out << to_string(b.value()) << "," << to_string(l) << "," << to_string(r) << "," << to_string(r / l)
                << "\n";
        }
    } else {
        print_element_table(out, h);
        out << "jumps:";
        if (jumps.empty()) out << " none";
        for (const auto& [p, v] : jumps.entries()) out << " " << to_string(p.value()) << "->" << to_string(v);
        out << "\n";
    }
    return 0;
}

inline int cmd_growth(const ExperimentConfig& c, std::ostream& out, bool with_norms) {
    need_inputs(c, 1);
    need_positive(c.N, "N");
    const PLHomeo f = load_element(c.inputs[0]);
    std::optional<GrowthParams> gp;
    std::string reason;
    try {
        gp = growth_params(f);
    } catch (const std::invalid_argument& e) {
        reason = e.what();
    }
    std::vector<GrowthRow> rows;
    {
        PLHomeo power;
        for (long n = 1; n <= c.N; ++n) {
            power = compose(f, power);
            rows.push_back({n, static_cast<long>(power.breakpoint_count()),
                            with_norms ? l2_norm_sq(orbit_of_zero(power)) : 0.0, gp ? gp->breakpoint_bound(n) : 0.0});
        }
    }
    const Json params = gp ? growth_params_to_json(*gp) : Json{{"unavailable", reason}};
    if (c.format == Format::json) {
        Json arr = Json::array();
        for (const auto& r : rows) {
            Json row{{"n", r.n}, {"M_n", r.breakpoints}};
            if (with_norms) row["norm_sq"] = r.norm_sq;
            row["bound"] = gp ? Json(r.bound) : Json(nullptr);
            arr.push_back(row);
        }
        print_json(out, Json{{"growth_params", params}, {"rows", arr}});
        return 0;
    }
    if (c.format == Format::csv) {
        out << "# " << params.dump() << "\n";
        out << (with_norms ? "n,M_n,norm_sq,bound\n" : "n,M_n,bound\n");
        for (const auto& r : rows) {
            out << r.n << "," << r.breakpoints << ",";
            if (with_norms) out << csv_double(r.norm_sq) << ",";
            out << (gp ? csv_double(r.bound) : "") << "\n";
        }
        return 0;
    }
    if (gp) {
        out << "component (" << to_string(gp->component.start.value()) << ", " << to_string(gp->component.end.value())
            << ")" << (gp->used_inverse ? " analyzed through the inverse" : "") << "\n";
        out << "c0 = " << csv_double(gp->c0) << ", c1 = " << csv_double(gp->c1) << ", mu = " << csv_double(gp->mu)
            << ", beta = " << csv_double(gp->beta) << "\n";
    } else {
        out << "growth parameters unavailable: " << reason << "\n";
    }
    out << std::setw(6) << "n" << std::setw(8) << "M_n";
    if (with_norms) out << std::setw(24) << "norm_sq";
    out << std::setw(24) << "bound" << "\n";
    for (const auto& r : rows) {
        out << std::setw(6) << r.n << std::setw(8) << r.breakpoints;
        if (with_norms) out << std::setw(24) << csv_double(r.norm_sq);
        out << std::setw(24) << (gp ? csv_double(r.bound) : "-") << "\n";
    }
    return 0;
}

inline int cmd_exotic(const ExperimentConfig& c, std::ostream& out) {
    need_positive(c.N, "N");
    Rational A, lambda;
    try {
        A = parse_rational(c.A);
        lambda = parse_rational(c.lambda);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--A/--lambda: ") + e.what());
    }
    const PLHomeo g = exotic_element({A, lambda});
    std::size_t max_bp = 0;
    double max_norm = 0.0;
    std::set<Rational> jump_values;
    PLHomeo power;
    for (long n = 1; n <= c.N; ++n) {
        power = compose(g, power);
        max_bp = std::max(max_bp, power.breakpoint_count());
        const JumpVector jp = jump_cocycle(power);
        for (const auto& [p, v] : jp.entries()) jump_values.insert(v);
        max_norm = std::max(max_norm, l2_norm_sq(orbit_of_zero(power)));
    }
    if (c.format == Format::table) {
        print_element_table(out, g);
        out << "iterates 1.." << c.N << ": max breakpoints " << max_bp << ", distinct jumps " << jump_values.size()
            << ", max norm_sq " << csv_double(max_norm) << "\n";
        return 0;
    }
    Json jumps = Json::array();
    for (const auto& v : jump_values) jumps.push_back(to_string(v));
    const Json report{{"element", element_to_json(g)},
                      {"iterates", c.N},
                      {"max_breakpoints", max_bp},
                      {"jump_values", jumps},
                      {"max_norm_sq", max_norm}};
    if (c.format == Format::json) {
        print_json(out, report);
    } else {
        out << "iterates,max_breakpoints,distinct_jumps,max_norm_sq\n"
            << c.N << "," << max_bp << "," << jump_values.size() << "," << csv_double(max_norm) << "\n";
    }
    return 0;
}

inline int cmd_rotnum(const ExperimentConfig& c, std::ostream& out) {
    need_inputs(c, 1);
    need_positive(c.max_q, "max-q");
    need_positive(c.depth, "depth");
    const PLHomeo h = load_element(c.inputs[0]);
    const RotNumResult r = rotation_number(h, c.max_q, c.depth);
    if (c.format == Format::json) {
        Json j = r.is_exact() ? Json{{"kind", "exact"}, {"value", to_string(r.value)}}
                              : Json{{"kind", "bracket"}, {"lo", to_string(r.lo)}, {"hi", to_string(r.hi)},
                                     {"depth", r.depth}};
        print_json(out, j);
    } else {
        out << r.describe() << "\n";
    }
    if (c.samples > 0) {
        need_positive(c.iterations, "iterations");
        const SemiConjugacy sc = semiconjugacy_table(h, c.samples, c.iterations);
        out << "# rotation estimate " << csv_double(sc.rotation()) << ", equivariance residual "
            << csv_double(sc.equivariance_residual(NumericMap(h))) << "\n";
        out << "x,phi\n";
        for (const auto& row : sc.table()) out << csv_double(row.x) << "," << csv_double(row.phi) << "\n";
    }
    return 0;
}

inline int cmd_smooth(const ExperimentConfig& c, std::ostream& out) {
    need_inputs(c, 1);
    need_positive(c.max_vertices, "max-vertices");
    const GroupPresentation G = group_from_json(load_json_file(c.inputs[0]));
    std::optional<long> budget;
    if (c.max_period > 0) budget = c.max_period;
    const SmoothingOutcome o = smooth_group(G, static_cast<std::size_t>(c.max_vertices), budget);
    if (c.format == Format::table) {
        out << "outcome: " << kind_name(o.kind) << "\n";
        if (o.kind == SmoothingOutcome::Kind::success) {
            out << "conjugator:\n";
            print_element_table(out, o.phi);
            for (std::size_t i = 0; i < o.conjugated.size(); ++i)
                out << G.generators[i].name << " -> rotation " << to_string(o.conjugated[i].vertices()[0].y) << "\n";
        } else {
            out << outcome_to_json(o, G).dump() << "\n";
        }
    } else {
        print_json(out, outcome_to_json(o, G));
    }
    return o.kind == SmoothingOutcome::Kind::success ? 0 : 1;
}

inline int cmd_cb_rank(const ExperimentConfig& c, std::ostream& out) {
    need_inputs(c, 1);
    const SymbolicSet s = set_from_json(load_json_file(c.inputs[0]));
    const auto chain = cb_chain(s);
    const CBRank r = cb_rank(s);
    std::vector<std::size_t> sizes;
    for (const auto& d : chain) sizes.push_back(d.clusters.size());
    if (c.format == Format::json) {
        print_json(out, Json{{"rank", r.rank}, {"top_finite_set_size", r.top_finite_set_size}, {"chain_clusters", sizes}});
    } else if (c.format == Format::csv) {
        out << "derivative,clusters\n";
        for (std::size_t i = 0; i < sizes.size(); ++i) out << i << "," << sizes[i] << "\n";
    } else {
        out << "rank " << r.rank << "\n";
        out << "top finite set size " << r.top_finite_set_size << "\n";
        out << "derivative chain clusters:";
        for (const auto s_ : sizes) out << " " << s_;
        out << "\n";
    }
    return 0;
}

inline int cmd_commensuration(const ExperimentConfig& c, std::ostream& out) {
    need_inputs(c, 1);
    const Json j = load_json_file(c.inputs[0]);
    std::vector<Generator> gens;
    if (j.is_object() && j.contains("generators"))
        gens = group_from_json(j).generators;
    else
        gens.push_back({"element", element_from_json(j)});
    if (c.format == Format::json) {
        Json o = Json::object();
        for (const auto& g : gens) o[g.name] = commensuration_defect(g.map);
        print_json(out, o);
    } else {
        if (c.format == Format::csv) out << "name,defect\n";
        for (const auto& g : gens)
            out << g.name << (c.format == Format::csv ? "," : ": ") << commensuration_defect(g.map) << "\n";
    }
    return 0;
}

inline int cmd_random(const ExperimentConfig& c, std::ostream& out) {
    if (c.k < 0) throw UsageError("k must be non-negative");
    need_positive(c.denom, "denom");
    const PLHomeo h = random_pl(c.seed, static_cast<std::size_t>(c.k), c.denom);
    if (c.format == Format::table)
        print_element_table(out, h);
    else
        print_json(out, element_to_json(h));
    return 0;
}

}  // namespace detail

/// Runs one command; diagnostics go to `err`.
inline int run(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
    using namespace detail;
    try {
        if (c.command == "eval") return cmd_eval(c, out);
        if (c.command == "compose") return cmd_compose(c, out);
        if (c.command == "show") return cmd_show(c, out);
        if (c.command == "orbit-norms") return cmd_growth(c, out, true);
        if (c.command == "breakpoint-growth") return cmd_growth(c, out, false);
        if (c.command == "exotic") return cmd_exotic(c, out);
        if (c.command == "rotnum") return cmd_rotnum(c, out);
        if (c.command == "smooth") return cmd_smooth(c, out);
        if (c.command == "cb-rank") return cmd_cb_rank(c, out);
        if (c.command == "commensuration") return cmd_commensuration(c, out);
        if (c.command == "random") return cmd_random(c, out);
        err << "error: unknown command '" << c.command << "'\n";
        return 2;
    } catch (const InvariantError& e) {
        err << "error: invariant '" << e.invariant() << "' violated: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace plc::cli
