#include "equiloc/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Exact localization workbench for Hamiltonian circle actions"};
    app.require_subcommand(1);

    equiloc::cli::RunConfig cfg;
    std::string xi_arg, class_arg, claimed_arg, c_arg, point_arg;

    auto add_common = [&](CLI::App* sub, bool takes_xi) {
        sub->add_option("input", cfg.input_path, "input JSON file (polytope or fixed-point data)")
            ->required();
        sub->add_option("-o,--output", cfg.output_path, "write the JSON result to a file");
        if (takes_xi)
            sub->add_option("--xi", xi_arg,
                            "circle direction as comma-separated integers, e.g. 1,2,4,8");
    };

    add_common(app.add_subcommand("ingest", "parse a file and echo its canonical form"), false);
    add_common(app.add_subcommand("validate", "run the fixed-point data checks"), true);

    CLI::App* integrate =
        app.add_subcommand("integrate", "integrate a class via localization");
    add_common(integrate, true);
    integrate->add_option("--class", class_arg,
                          "class expression: omega, tau:<facet>, canon:<id>, products "
                          "via *, powers via ^")
        ->required();

    CLI::App* canonical =
        app.add_subcommand("canonical", "compute certified canonical classes");
    add_common(canonical, true);
    canonical->add_option("--point", point_arg, "only the class based at this fixed point");

    add_common(app.add_subcommand("witness", "compute the rank/unimodality witness"), true);

    CLI::App* contradict = app.add_subcommand(
        "contradict", "run the sign-contradiction detector on claimed classes");
    add_common(contradict, false);
    contradict->add_option("--claimed", claimed_arg, "JSON file with claimed index-2 classes")
        ->required();
    contradict->add_option("--c", c_arg, "combination coefficients, comma-separated rationals");
    contradict->add_flag("--kernel", cfg.kernel_retry,
                         "on precondition failure, retry with an index-4 kernel vector");

    add_common(app.add_subcommand("report", "run the full verification pipeline"), true);

    CLI11_PARSE(app, argc, argv);

    cfg.command = app.get_subcommands().front()->get_name();
    try {
        if (!xi_arg.empty()) cfg.xi = equiloc::cli::parse_xi(xi_arg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return equiloc::cli::exit_malformed_input;
    }
    if (!class_arg.empty()) cfg.flags["class"] = class_arg;
    if (!claimed_arg.empty()) cfg.flags["claimed"] = claimed_arg;
    if (!c_arg.empty()) cfg.flags["c"] = c_arg;
    if (!point_arg.empty()) cfg.flags["point"] = point_arg;

    return equiloc::cli::run(cfg, std::cout, std::cerr);
}
