#include "commands.hpp"
#include "scenario.hpp"

#include "crs/errors.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

namespace {

enum ExitCode { ok = 0, validation_failed = 1, config_error = 2, convergence_error = 3, internal = 4 };

void emit(const std::string& text, const std::string& path)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw crs::ConfigError("cannot write output file '" + path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Average rate, outage and power allocation for NOMA cooperative relaying over alpha-mu fading"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::optional<std::string> backend;
    bool optimize = false;
    std::optional<int> grid_m;
    std::optional<std::string> out;
    std::optional<double> tolerance;

    app.add_option("--scenario", scenario_path, "Scenario file (INI)");
    app.add_option("--seed", seed, "Monte-Carlo root seed");
    app.add_option("--samples", samples, "Monte-Carlo sample count");
    app.add_option("--backend", backend, "closed-form | quadrature | mc");
    app.add_flag("--optimize-a2", optimize, "Optimize a2 at every sweep point");
    app.add_option("--grid-m", grid_m, "Power-allocation grid size M");
    app.add_option("--out", out, "Output path (default: stdout)");
    app.add_option("--tolerance", tolerance, "Relative contour-refinement tolerance");

    auto* rate = app.add_subcommand("rate", "Average achievable rates over a sweep");
    auto* outage = app.add_subcommand("outage", "Outage probabilities over an SNR sweep");
    auto* optimize_cmd = app.add_subcommand("optimize", "Optimal a2 per SNR (grid search)");
    auto* validate = app.add_subcommand("validate", "Run the invariant suite, JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ExitCode::ok : ExitCode::config_error;
    }

    try {
        crs::cli::Scenario s;
        if (!scenario_path.empty()) {
            s = crs::cli::load_scenario(scenario_path);
        } else if (!validate->parsed()) {
            throw crs::ConfigError("--scenario is required for this command");
        }
        if (seed) s.mc.seed = *seed;
        if (samples) s.mc.n = *samples;
        if (backend) s.backend = crs::parse_backend(*backend);
        if (optimize) s.optimize_a2 = true;
        if (grid_m) s.grid_m = *grid_m;
        if (out) s.out = *out;
        if (tolerance) s.tolerance = *tolerance;
        for (const auto& w : s.links.warnings()) std::cerr << "warning: " << w << '\n';

        if (rate->parsed()) {
            emit(crs::cli::cmd_rate(s), s.out);
        } else if (outage->parsed()) {
            emit(crs::cli::cmd_outage(s), s.out);
        } else if (optimize_cmd->parsed()) {
            emit(crs::cli::cmd_optimize(s), s.out);
        } else {
            const auto report = crs::cli::cmd_validate(s);
            emit(report.json, s.out);
            return report.passed ? ExitCode::ok : ExitCode::validation_failed;
        }
        return ExitCode::ok;
    } catch (const crs::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return ExitCode::config_error;
    } catch (const crs::ConvergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return ExitCode::convergence_error;
    } catch (const crs::DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return ExitCode::config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ExitCode::internal;
    }
}
