#pragma once

#include "gravent/analytics.hpp"
#include "gravent/config.hpp"
#include "gravent/environment.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gravent::cli {

struct SimulationSummary {
    dynamics::DerivedRates rates;
    double peak_e = 0.0;
    double peak_t = 0.0;
    // (threshold, first crossing time); +inf when never reached on the grid.
    std::vector<std::pair<double, double>> threshold_crossings;
    analytics::ReleasedRegime regime{};
    bool regime_applicable = false;
    std::string series_path;
    std::string summary_path;
};

/// Run one scenario over the configured time grid; writes the CSV series and
/// JSON summary named in [output] (paths may be overridden). Output is
/// byte-stable across runs.
SimulationSummary run_simulate(const ParsedConfig& config,
                               const std::string& series_override = "",
                               const std::string& summary_override = "");

/// Compose the decoherence/Casimir feasibility report and write it as JSON.
environment::FeasibilityReport run_feasibility(const ParsedConfig& config, double target_e,
                                               const std::string& out_path,
                                               std::optional<double> dx_override = {});

struct SweepResult {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;  // feasible encoded as 0/1
    std::string results_path;
};

/// Evaluate the sweep grid (lexicographic over axes, parallel workers,
/// deterministic row order) and write the long-form CSV.
SweepResult run_sweep(const ParsedConfig& config, int threads = 0,
                      const std::string& results_override = "");

/// JSON report of every closed-form quantity for the configured scenario.
std::string analytic_report_json(const ParsedConfig& config);

/// JSON report of the shape-comparison rates.
std::string geometry_report_json(const ParsedConfig& config,
                                 const std::vector<double>& alphas,
                                 const std::vector<double>& varsigmas,
                                 const std::vector<double>& trajectory_times);

}  // namespace gravent::cli
