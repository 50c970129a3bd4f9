#include "gravent/cli.hpp"

#include "gravent/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

namespace gravent::cli {

namespace {

void emit(const std::string& path, const std::string& content) {
    if (path == "-" || path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    double rel_tol = 0.0;

    ParsedConfig load() const {
        std::vector<std::string> all = overrides;
        if (rel_tol > 0.0) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "numerics.rel_tol=%.17g", rel_tol);
            all.emplace_back(buf);
        }
        return parse_config_file(config_path, all);
    }
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-c,--config", args.config_path, "scenario config file")->required();
    cmd->add_option("--set", args.overrides, "override a config key (section.key=value)");
    cmd->add_option("--rel-tol", args.rel_tol, "covariance integration relative tolerance");
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"gravent: gravitational entanglement simulator and analysis toolkit"};
    app.require_subcommand(1);

    CommonArgs sim_args;
    std::string series_path, summary_path;
    auto* simulate = app.add_subcommand("simulate", "propagate a scenario over a time grid");
    add_common(simulate, sim_args);
    simulate->add_option("--series", series_path, "override the CSV series path");
    simulate->add_option("--summary", summary_path, "override the JSON summary path");

    CommonArgs feas_args;
    double target_e = 0.0;
    double dx_override = 0.0;
    bool enforce = false;
    std::string feas_out;
    auto* feasibility =
        app.add_subcommand("feasibility", "decoherence and Casimir feasibility report");
    add_common(feasibility, feas_args);
    feasibility->add_option("--target", target_e, "target logarithmic negativity")->required();
    feasibility->add_option("--dx", dx_override, "explicit superposition size in meters");
    feasibility->add_option("-o,--out", feas_out, "report path (default [output] summary)");
    feasibility->add_flag("--enforce", enforce, "exit 4 when the target is infeasible");

    CommonArgs sweep_args;
    int threads = 0;
    std::string results_path;
    auto* sweep = app.add_subcommand("sweep", "evaluate a parameter grid");
    add_common(sweep, sweep_args);
    sweep->add_option("--threads", threads, "worker count (default: hardware)");
    sweep->add_option("--results", results_path, "override the results CSV path");

    CommonArgs geo_args;
    std::vector<double> alphas, varsigmas, trajectory_times;
    std::string geo_out = "-";
    auto* geometry = app.add_subcommand("geometry", "shape-comparison interaction rates");
    add_common(geometry, geo_args);
    geometry->add_option("--alpha", alphas, "unequal-sphere radius ratios");
    geometry->add_option("--varsigma", varsigmas, "rod-sphere aspect parameters 2L/d");
    geometry->add_option("--trajectory-t", trajectory_times, "classical trajectory times [s]");
    geometry->add_option("-o,--out", geo_out, "output path or - for stdout");

    CommonArgs analytic_args;
    std::string analytic_out = "-";
    auto* analytic = app.add_subcommand("analytic", "closed-form figures of merit");
    add_common(analytic, analytic_args);
    analytic->add_option("-o,--out", analytic_out, "output path or - for stdout");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("gravent");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) {
            const auto summary = run_simulate(sim_args.load(), series_path, summary_path);
            std::printf("peak E = %.6g at t = %.6g s", summary.peak_e, summary.peak_t);
            for (const auto& [threshold, t] : summary.threshold_crossings) {
                if (std::isfinite(t)) {
                    std::printf("; E >= %g at t = %.6g s", threshold, t);
                } else {
                    std::printf("; E >= %g not reached", threshold);
                }
            }
            std::printf("\n");
        } else if (feasibility->parsed()) {
            ParsedConfig config = feas_args.load();
            std::string out = feas_out.empty() ? config.output.summary_path : feas_out;
            std::optional<double> dx;
            if (dx_override > 0.0) dx = dx_override;
            const auto report = run_feasibility(config, target_e, out, dx);
            std::printf("t_target = %s s, tau_photon = %.4g s, tau_gas = %.4g s, r_cg = %.4g"
                        " -> %s\n",
                        report.target_reached ? std::to_string(report.t_target_s).c_str()
                                              : "unreached",
                        report.tau_photon_s, report.tau_gas_s, report.casimir_gravity_ratio,
                        report.feasible ? "feasible" : "infeasible");
            if (enforce && !report.feasible) return 4;
        } else if (sweep->parsed()) {
            const auto result = run_sweep(sweep_args.load(), threads, results_path);
            std::printf("wrote %zu sweep rows to %s\n", result.rows.size(),
                        result.results_path.c_str());
        } else if (geometry->parsed()) {
            emit(geo_out,
                 geometry_report_json(geo_args.load(), alphas, varsigmas, trajectory_times));
        } else if (analytic->parsed()) {
            emit(analytic_out, analytic_report_json(analytic_args.load()));
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}

}  // namespace gravent::cli
