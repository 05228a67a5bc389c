// Command-line front end: argument parsing only, the work happens in
// plc::cli::run.

#include "plcircle/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char** argv) {
    using plc::cli::Format;
    CLI::App app{"Exact experiments with piecewise-linear circle homeomorphisms"};
    app.require_subcommand(1);

    plc::cli::ExperimentConfig config;
    const std::map<std::string, Format> formats{{"table", Format::table}, {"csv", Format::csv}, {"json", Format::json}};

    for (const auto& name : plc::cli::commands()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("inputs", config.inputs, "input JSON files");
        sub->add_option("--format", config.format, "output format: table, csv or json")
            ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
        if (name == "orbit-norms" || name == "breakpoint-growth" || name == "exotic")
            sub->add_option("-N", config.N, "number of iterates");
        if (name == "eval") sub->add_option("--point", config.point, "circle point p/q");
        if (name == "exotic") {
            sub->add_option("--A", config.A, "modulus A > 1");
            sub->add_option("--lambda", config.lambda, "multiplier in (1, A)");
        }
        if (name == "rotnum") {
            sub->add_option("--max-q", config.max_q, "largest period searched for");
            sub->add_option("--depth", config.depth, "Farey refinements when no period is found");
            sub->add_option("--samples", config.samples, "rows of the semi-conjugacy table (0 = none)");
            sub->add_option("--iterations", config.iterations, "orbit length for the semi-conjugacy");
        }
        if (name == "smooth") {
            sub->add_option("--max-vertices", config.max_vertices, "orbit graph size cap");
            sub->add_option("--max-period", config.max_period, "finite-orbit search budget (0 = off)");
        }
        if (name == "random") {
            sub->add_option("--seed", config.seed, "generator seed");
            sub->add_option("-k", config.k, "maximal number of breakpoints");
            sub->add_option("--denom", config.denom, "denominator bound");
        }
        sub->callback([&config, name] { config.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return plc::cli::run(config, std::cout, std::cerr);
}
