#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "nicadil/scenario.hpp"
#include "nicadil/version.hpp"

// Scenario runner. Exit codes: 0 all verdicts pass, 1 verdict failure,
// 2 schema/usage error, 3 computation error.
int main(int argc, char** argv) {
    CLI::App app{"nicadil - finite truncations of minimal isometric Nica-covariant dilations"};
    app.get_formatter()->column_width(30);

    std::string scenario_path;
    std::string out_path;
    bool show_schema = false;
    bool show_version = false;
    bool quiet = false;
    nicadil::RunFlags flags;

    std::uint64_t seed_opt = 0;
    double tol_opt = 0.0;
    int depth_opt = 0;

    app.add_option("scenario", scenario_path, "scenario JSON file");
    app.add_option("--out", out_path, "write the report to this path instead of stdout");
    auto* seed_flag = app.add_option("--seed", seed_opt, "override the scenario seed");
    auto* tol_flag = app.add_option("--tol", tol_opt, "override the algebraic tolerance");
    auto* depth_flag = app.add_option("--depth", depth_opt, "override the default grid depth");
    app.add_flag("--quiet", quiet, "suppress the report on stdout");
    app.add_flag("--parallel", flags.parallel,
                 "run independent tasks concurrently (report order is unchanged)");
    app.add_flag("--schema", show_schema, "print the scenario JSON schema and exit");
    app.add_flag("--version", show_version, "print the tool version and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints usage/error text
        return code == 0 ? 0 : 2;      // --help is not an error
    }

    if (show_version) {
        std::cout << "nicadil " << nicadil::kVersion << "\n";
        return 0;
    }
    if (show_schema) {
        std::cout << nicadil::scenario_schema_text();
        return 0;
    }
    if (scenario_path.empty()) {
        std::cerr << "error: a scenario file is required (or --schema / --version)\n";
        std::cerr << app.help();
        return 2;
    }

    if (seed_flag->count()) flags.seed = seed_opt;
    if (tol_flag->count()) flags.tol = tol_opt;
    if (depth_flag->count()) flags.depth = depth_opt;

    const nicadil::ScenarioResult result = nicadil::run_scenario_file(scenario_path, flags);
    const std::string text = nicadil::report_to_string(result.report);

    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write report to '" << out_path << "'\n";
            return 2;
        }
        out << text;
    }
    if (!quiet && out_path.empty()) std::cout << text;

    if (result.exit_code != 0)
        std::cerr << "verdict: " << result.report.value("verdict", "error") << "\n";
    return result.exit_code;
}
