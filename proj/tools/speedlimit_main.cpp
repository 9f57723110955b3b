#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "speedlimit/report.hpp"
#include "speedlimit/scenario.hpp"
#include "speedlimit/svg_plot.hpp"
#include "speedlimit/validation.hpp"

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

int run_scenario(const std::string& config_path) {
    const speedlimit::ScenarioConfig config =
        speedlimit::ScenarioConfig::from_json_file(config_path);
    const speedlimit::SpeedLimitReport report = speedlimit::build_report(config);
    speedlimit::write_report_csv(report, config.output.csv);
    speedlimit::write_summary_json(report, config.output.summary);

    const std::size_t last = report.nodes() - 1;
    std::printf("wrote %s (%zu rows) and %s\n", config.output.csv.c_str(), report.nodes(),
                config.output.summary.c_str());
    std::printf("grid: %d x %d nodes, q in [-%s, %s], p in [-%s, %s]\n", config.grid.cells + 1,
                config.grid.cells + 1, num(report.q_half).c_str(), num(report.q_half).c_str(),
                num(report.p_half).c_str(), num(report.p_half).c_str());
    std::printf("endpoint t = %s: T_wigner = %s, T_classical = %s, B = %s\n",
                num(report.t[last]).c_str(), num(report.T_wigner[last]).c_str(),
                num(report.T_classical[last]).c_str(), num(report.B[last]).c_str());
    std::printf("  tau_qsl = %s  slack = %s\n", num(report.tau_qsl[last]).c_str(),
                num(report.slack_qsl[last]).c_str());
    std::printf("  tau_ssl = %s  slack = %s\n", num(report.tau_ssl[last]).c_str(),
                num(report.slack_ssl[last]).c_str());
    std::printf("  tau_csl = %s  slack = %s\n", num(report.tau_csl[last]).c_str(),
                num(report.slack_csl[last]).c_str());
    std::printf("mass defects: wigner %s, density %s\n",
                num(report.max_wigner_mass_defect).c_str(),
                num(report.max_density_mass_defect).c_str());
    return 0;
}

int run_fig1(const std::string& config_path) {
    speedlimit::ScenarioConfig config = speedlimit::ScenarioConfig::from_json_file(config_path);
    // `run` and `fig1` share the config schema; when the output name was
    // left at the run default, emit the comparison series next to it.
    if (config.output.csv == "report.csv") config.output.csv = "fig1.csv";
    const speedlimit::Fig1Data fig = speedlimit::build_fig1(config);
    speedlimit::write_fig1_csv(fig, config.output.csv);
    std::printf("wrote %s (%zu rows)\n", config.output.csv.c_str(), fig.t.size());
    return 0;
}

int run_validate(const speedlimit::ValidationOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const auto results = speedlimit::run_validation(options);
    int failed = 0;
    for (const auto& r : results) {
        if (!r.passed) ++failed;
        std::printf("[%s] %-40s measured=%-10s tol=%-10s %s\n", r.passed ? "PASS" : "FAIL",
                    r.name.c_str(), num(r.measured).c_str(), num(r.tolerance).c_str(),
                    r.detail.c_str());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%zu checks, %d failed, %.1f s (grid %d)\n", results.size(), failed, elapsed,
                options.grid);
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"speedlimit: quantum and classical speed-limit bounds in phase space"};
    app.require_subcommand(1);

    std::string config_path;
    std::string csv_path, svg_path;
    speedlimit::ValidationOptions validate_options;

    CLI::App* cmd_run = app.add_subcommand("run", "evaluate a scenario, write report.csv + summary.json");
    cmd_run->add_option("config", config_path, "scenario config (JSON)")->required();

    CLI::App* cmd_fig1 = app.add_subcommand(
        "fig1", "classical comparison series (|dB/dt|, v_mt, closed-form v_csl) -> fig1.csv");
    cmd_fig1->add_option("config", config_path, "scenario config (JSON)")->required();

    CLI::App* cmd_validate = app.add_subcommand("validate", "run the built-in invariant suite");
    cmd_validate->add_option("--grid", validate_options.grid,
                             "cells per axis for resolution-dependent checks (default 512)");
    cmd_validate->add_flag("--const-bddot", validate_options.const_bddot,
                           "freeze the curvature in the reference-run closed form at omega0^2");

    CLI::App* cmd_plot = app.add_subcommand("plot", "render a CSV written by run/fig1 as an SVG line chart");
    cmd_plot->add_option("csv", csv_path, "input CSV")->required();
    cmd_plot->add_option("svg", svg_path, "output SVG")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) return run_scenario(config_path);
        if (cmd_fig1->parsed()) return run_fig1(config_path);
        if (cmd_validate->parsed()) return run_validate(validate_options);
        if (cmd_plot->parsed()) {
            speedlimit::write_svg_plot(csv_path, svg_path);
            std::printf("wrote %s\n", svg_path.c_str());
            return 0;
        }
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "speedlimit: config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "speedlimit: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "speedlimit: %s\n", e.what());
        return 1;
    }
    return 0;
}
