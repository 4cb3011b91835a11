// catswap command line: runs declarative scenario files, the built-in
// acceptance suite, and timing sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "catswap/acceptance.hpp"
#include "catswap/scenario.hpp"

namespace {

int run_command(const std::string& file, std::uint64_t seed, bool seed_given,
                const std::string& format, const std::string& out_path) {
    catswap::ScenarioConfig cfg;
    try {
        cfg = catswap::load_scenario(file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (seed_given) cfg.seed = seed;

    catswap::ProtocolReport report;
    try {
        report = catswap::run_scenario(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    const auto fmt = format == "table" ? catswap::ReportFormat::Table
                                       : catswap::ReportFormat::Json;
    const std::string text = catswap::emit_report(report, fmt);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return 2;
        }
        out << text;
        std::cerr << "report written to " << out_path << " ("
                  << (report.all_pass() ? "PASS" : "FAIL") << ", "
                  << report.wall_seconds << " s)\n";
    }
    return report.all_pass() ? 0 : 1;
}

int verify_command(const std::string& scenario_dir) {
    const auto criteria = catswap::run_acceptance(scenario_dir);
    int failures = 0;
    for (const auto& c : criteria) {
        std::printf("[%s] %2d. %s\n", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str());
        if (!c.pass && !c.detail.empty()) std::printf("        %s\n", c.detail.c_str());
        if (!c.pass) ++failures;
    }
    std::printf("%zu criteria, %d failed\n", criteria.size(), failures);
    return failures == 0 ? 0 : 1;
}

int sweep_command(const catswap::SweepGrid& grid, const std::string& format) {
    std::vector<catswap::SweepRow> rows;
    try {
        rows = catswap::timing_sweep(grid);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (format == "json") {
        catswap::ProtocolReport report;
        report.scenario = "timing-sweep";
        report.mode = "exhaustive";
        report.sweep = rows;
        std::cout << catswap::emit_report(report, catswap::ReportFormat::Json);
        return 0;
    }
    std::printf("L,v,c,t_m,levels,t1,t2,advantage\n");
    for (const auto& row : rows) {
        std::printf("%.12g,%.12g,%.12g,%.12g,%d,%.12g,%.12g,%d\n", row.length,
                    row.particle_speed, row.classical_speed, row.measure_time, row.levels,
                    row.t1, row.t2, row.advantageous ? 1 : 0);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiparticle entanglement swapping simulator"};
    app.require_subcommand(1);

    // run
    std::string scenario_file, out_path;
    std::string format = "json";
    std::uint64_t seed = 0;
    auto* run = app.add_subcommand("run", "run a scenario file and emit a report");
    run->add_option("scenario", scenario_file, "scenario JSON file")->required();
    auto* seed_opt = run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--format", format, "json | table")
        ->check(CLI::IsMember({"json", "table"}));
    run->add_option("--out", out_path, "write the report to a file instead of stdout");

    // verify
    std::string scenario_dir = "scenarios";
    auto* verify = app.add_subcommand("verify", "run the built-in acceptance suite");
    verify->add_option("--scenarios", scenario_dir, "directory with the bundled scenarios");

    // sweep
    catswap::SweepGrid grid;
    grid.length = {4.0};
    grid.particle_speed = {1.0};
    grid.classical_speed = {2.0};
    grid.measure_time = {0.0, 0.5, 1.0};
    grid.levels = {1, 2, 3};
    std::string sweep_format = "csv";
    auto* sweep = app.add_subcommand("sweep", "tabulate relay timing over a grid");
    sweep->add_option("--L", grid.length, "user separations");
    sweep->add_option("--v", grid.particle_speed, "particle speeds");
    sweep->add_option("--c", grid.classical_speed, "classical signal speeds");
    sweep->add_option("--tm", grid.measure_time, "Bell measurement durations");
    sweep->add_option("--levels", grid.levels, "substation hierarchy depths");
    sweep->add_flag("--classical", grid.include_classical,
                    "include the classical broadcast term");
    sweep->add_option("--format", sweep_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        return run_command(scenario_file, seed, seed_opt->count() > 0, format, out_path);
    }
    if (verify->parsed()) {
        return verify_command(scenario_dir);
    }
    return sweep_command(grid, sweep_format);
}
