#include "gravent/runner.hpp"

#include "gravent/constants.hpp"
#include "gravent/geometry.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

namespace gravent::cli {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kSchemaVersion = 1;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

json scenario_json(const dynamics::Scenario& s) {
    json j;
    j["setup"] = s.setup == dynamics::SetupKind::Oscillators ? "oscillators" : "released";
    j["mass_kg"] = s.mass_kg;
    j["omega"] = s.omega;
    j["separation_m"] = s.separation_m;
    j["gamma"] = s.gamma;
    j["nbar"] = s.initial.nbar;
    j["s_a"] = s.initial.s_a;
    j["s_b"] = s.initial.s_b;
    if (s.material_density) j["density"] = *s.material_density;
    return j;
}

// First grid interval that straddles the threshold; refined by bisection with
// fresh exact propagations when undamped, linear interpolation otherwise.
double threshold_crossing(const dynamics::Scenario& scenario,
                          const dynamics::EntanglementSeries& series, double threshold,
                          const dynamics::IntegrationOptions& integration, bool undamped) {
    const auto& s = series.samples;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i].log_negativity >= threshold) {
            if (i == 0) return s[0].t;
            const double e0 = s[i - 1].log_negativity;
            const double e1 = s[i].log_negativity;
            if (!undamped) {
                const double w = e1 > e0 ? (threshold - e0) / (e1 - e0) : 1.0;
                return s[i - 1].t + w * (s[i].t - s[i - 1].t);
            }
            double lo = s[i - 1].t;
            double hi = s[i].t;
            for (int iter = 0; iter < 60 && hi - lo > 1e-12 * std::max(hi, 1.0); ++iter) {
                const double mid = 0.5 * (lo + hi);
                const std::array<double, 1> probe{mid};
                const auto sample =
                    dynamics::entanglement_trace(scenario, probe, integration).samples[0];
                (sample.log_negativity >= threshold ? hi : lo) = mid;
            }
            return hi;
        }
    }
    return kInf;
}

struct Peak {
    double e = 0.0;
    double t = 0.0;
};

Peak find_peak(const dynamics::Scenario& scenario, const dynamics::EntanglementSeries& series,
               const dynamics::IntegrationOptions& integration, bool undamped) {
    const auto& s = series.samples;
    Peak peak;
    size_t arg = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i].log_negativity > peak.e) {
            peak.e = s[i].log_negativity;
            peak.t = s[i].t;
            arg = i;
        }
    }
    // Parabolic vertex through the neighbours sharpens the grid estimate; for
    // undamped scenarios the vertex is re-evaluated exactly.
    if (arg > 0 && arg + 1 < s.size()) {
        const double t0 = s[arg - 1].t, t1 = s[arg].t, t2 = s[arg + 1].t;
        const double e0 = s[arg - 1].log_negativity, e1 = s[arg].log_negativity,
                     e2 = s[arg + 1].log_negativity;
        const double denom = (e0 - 2.0 * e1 + e2);
        if (denom < 0.0) {
            const double half_step = 0.5 * (t2 - t0) / 2.0;
            const double t_vertex =
                std::clamp(t1 + half_step * (e0 - e2) / denom, t0, t2);
            if (undamped) {
                const std::array<double, 1> probe{t_vertex};
                const auto sample =
                    dynamics::entanglement_trace(scenario, probe, integration).samples[0];
                if (sample.log_negativity > peak.e) {
                    peak.e = sample.log_negativity;
                    peak.t = t_vertex;
                }
            }
        }
    }
    return peak;
}

}  // namespace

SimulationSummary run_simulate(const ParsedConfig& config, const std::string& series_override,
                               const std::string& summary_override) {
    if (!config.has_time) {
        throw ConfigError("<config>", 0, "simulate needs a [time] section");
    }
    const dynamics::Scenario scenario = config.make_scenario();
    const auto times = config.time.times();
    const auto series = dynamics::entanglement_trace(scenario, times, config.integration);
    const bool undamped = scenario.gamma == 0.0;

    SimulationSummary summary;
    summary.rates = dynamics::derived_rates(scenario);
    summary.series_path =
        series_override.empty() ? config.output.series_path : series_override;
    summary.summary_path =
        summary_override.empty() ? config.output.summary_path : summary_override;

    const Peak peak = find_peak(scenario, series, config.integration, undamped);
    summary.peak_e = peak.e;
    summary.peak_t = peak.t;

    for (const double threshold : config.output.thresholds) {
        summary.threshold_crossings.emplace_back(
            threshold,
            threshold_crossing(scenario, series, threshold, config.integration, undamped));
    }

    if (scenario.setup == dynamics::SetupKind::Released) {
        summary.regime_applicable = true;
        analytics::released_entanglement(times.back(), scenario.mass_kg, scenario.omega,
                                         scenario.separation_m, scenario.initial.nbar,
                                         &summary.regime);
    }

    if (!summary.series_path.empty()) {
        const double unit = std::sqrt(constants().hbar / (scenario.mass_kg * scenario.omega));
        std::string csv = "t,E,nu_tilde_min,dx_A,dx_B,mean_xA,mean_xB\n";
        for (const auto& sample : series.samples) {
            csv += fmt(sample.t);
            csv += ',';
            csv += fmt(sample.log_negativity);
            csv += ',';
            csv += fmt(sample.nu_tilde_min);
            csv += ',';
            csv += fmt(sample.width_a_m);
            csv += ',';
            csv += fmt(sample.width_b_m);
            csv += ',';
            csv += fmt(unit * sample.mean(0));
            csv += ',';
            csv += fmt(unit * sample.mean(2));
            csv += '\n';
        }
        write_file(summary.series_path, csv);
    }

    if (!summary.summary_path.empty()) {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["scenario"] = scenario_json(scenario);
        j["eta"] = summary.rates.eta;
        j["nu"] = summary.rates.nu;
        j["samples"] = series.samples.size();
        j["peak"] = {{"E", summary.peak_e}, {"t", summary.peak_t}};
        json crossings = json::object();
        for (const auto& [threshold, t] : summary.threshold_crossings) {
            crossings[fmt(threshold)] = std::isfinite(t) ? json(t) : json(nullptr);
        }
        j["threshold_crossings"] = crossings;
        if (summary.regime_applicable) {
            j["validity"] = {{"eta_ok", summary.regime.eta_ok},
                             {"time_ok", summary.regime.time_ok}};
        }
        write_file(summary.summary_path, j.dump(2) + "\n");
    }
    return summary;
}

environment::FeasibilityReport run_feasibility(const ParsedConfig& config, double target_e,
                                               const std::string& out_path,
                                               std::optional<double> dx_override) {
    if (!config.has_environment) {
        throw ConfigError("<config>", 0, "feasibility needs an [environment] section");
    }
    const dynamics::Scenario scenario = config.make_scenario();
    environment::FeasibilityOptions options;
    options.integration = config.integration;
    options.dx_override_m = dx_override;
    if (config.has_time) options.horizon_s = config.time.t_end;
    const auto report = environment::feasibility(scenario, config.env, target_e, options);

    if (!out_path.empty()) {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["scenario"] = scenario_json(scenario);
        j["target_E"] = target_e;
        j["t_target"] = report.target_reached ? json(report.t_target_s) : json(nullptr);
        j["target_reached"] = report.target_reached;
        j["horizon"] = report.horizon_s;
        j["dx_used_m"] = report.dx_used_m;
        j["tau_photon_s"] =
            std::isfinite(report.tau_photon_s) ? json(report.tau_photon_s) : json(nullptr);
        j["tau_gas_s"] = std::isfinite(report.tau_gas_s) ? json(report.tau_gas_s) : json(nullptr);
        j["casimir_gravity_ratio"] = report.casimir_gravity_ratio;
        j["flags"] = {{"photon_wavelength_ok", report.photon_wavelength_ok},
                      {"gas_wavelength_ok", report.gas_wavelength_ok}};
        j["feasible"] = report.feasible;
        write_file(out_path, j.dump(2) + "\n");
    }
    return report;
}

SweepResult run_sweep(const ParsedConfig& config, int threads,
                      const std::string& results_override) {
    if (config.sweep_axes.empty()) {
        throw ConfigError("<config>", 0, "sweep needs at least one axis in [sweep]");
    }
    if (!config.sweep_target_e) {
        throw ConfigError("<config>", 0, "sweep needs target_e in [sweep]");
    }
    if (!config.has_environment) {
        throw ConfigError("<config>", 0, "sweep needs an [environment] section");
    }
    if (!config.has_time) {
        throw ConfigError("<config>", 0, "sweep needs a [time] section");
    }

    long total = 1;
    for (const auto& axis : config.sweep_axes) {
        total *= static_cast<long>(axis.values.size());
    }
    if (total > config.sweep_max_points) {
        throw ConfigError("<config>", 0,
                          "sweep grid has " + std::to_string(total) +
                              " points, above the max_points cap of " +
                              std::to_string(config.sweep_max_points));
    }

    SweepResult result;
    for (const auto& axis : config.sweep_axes) result.header.push_back(axis.name);
    for (const char* name : {"eta", "nu", "peak_E", "t_peak", "t_target", "tau_photon_s",
                             "tau_gas_s", "r_cg", "feasible"}) {
        result.header.emplace_back(name);
    }
    result.rows.assign(static_cast<size_t>(total), {});

    const size_t n_axes = config.sweep_axes.size();
    auto point_values = [&](long index) {
        std::vector<double> values(n_axes);
        long rest = index;
        for (size_t a = n_axes; a-- > 0;) {
            const auto& axis = config.sweep_axes[a];
            const long n = static_cast<long>(axis.values.size());
            values[a] = axis.values[static_cast<size_t>(rest % n)];
            rest /= n;
        }
        return values;
    };

    auto evaluate = [&](long index) {
        const std::vector<double> values = point_values(index);
        ParsedConfig point = config;
        for (size_t a = 0; a < n_axes; ++a) {
            apply_axis_value(point, config.sweep_axes[a].name, values[a]);
        }
        const dynamics::Scenario scenario = point.make_scenario();
        const auto rates = dynamics::derived_rates(scenario);

        const auto times = point.time.times();
        const auto series = dynamics::entanglement_trace(scenario, times, point.integration);
        const Peak peak =
            find_peak(scenario, series, point.integration, scenario.gamma == 0.0);

        environment::FeasibilityOptions options;
        options.integration = point.integration;
        options.horizon_s = point.time.t_end;
        const auto report =
            environment::feasibility(scenario, point.env, *point.sweep_target_e, options);

        std::vector<double> row = values;
        row.push_back(rates.eta);
        row.push_back(rates.nu);
        row.push_back(peak.e);
        row.push_back(peak.t);
        row.push_back(report.target_reached ? report.t_target_s : kInf);
        row.push_back(report.tau_photon_s);
        row.push_back(report.tau_gas_s);
        row.push_back(report.casimir_gravity_ratio);
        row.push_back(report.feasible ? 1.0 : 0.0);
        result.rows[static_cast<size_t>(index)] = std::move(row);
    };

    int n_threads = threads > 0 ? threads
                                : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::clamp<int>(n_threads, 1, static_cast<int>(total));
    if (n_threads == 1) {
        for (long i = 0; i < total; ++i) evaluate(i);
    } else {
        std::atomic<long> next{0};
        std::vector<std::thread> pool;
        std::mutex error_mutex;
        std::exception_ptr first_error;
        for (int w = 0; w < n_threads; ++w) {
            pool.emplace_back([&] {
                for (long i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
                    try {
                        evaluate(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& worker : pool) worker.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    result.results_path =
        results_override.empty() ? config.output.results_path : results_override;
    if (!result.results_path.empty()) {
        std::string csv;
        for (size_t i = 0; i < result.header.size(); ++i) {
            csv += (i ? "," : "");
            csv += result.header[i];
        }
        csv += '\n';
        for (const auto& row : result.rows) {
            for (size_t i = 0; i < row.size(); ++i) {
                csv += (i ? "," : "");
                csv += std::isfinite(row[i]) ? fmt(row[i]) : "inf";
            }
            csv += '\n';
        }
        write_file(result.results_path, csv);
    }
    return result;
}

std::string analytic_report_json(const ParsedConfig& config) {
    const dynamics::Scenario s = config.make_scenario();
    const auto rates = dynamics::derived_rates(s);
    json j;
    j["schema_version"] = kSchemaVersion;
    j["scenario"] = scenario_json(s);
    j["eta"] = rates.eta;
    j["nu"] = rates.nu;

    const auto thermal =
        analytics::oscillator_peak_thermal(rates.eta, s.omega, s.initial.nbar);
    j["oscillator_peak_thermal"] = {{"E_max", thermal.e_max}, {"t_max", thermal.t_max}};
    if (s.initial.s_a != 0.0 || s.initial.s_b != 0.0) {
        const auto squeezed = analytics::oscillator_peak_squeezed(
            s.initial.s_a, s.initial.s_b, rates.eta, s.omega, s.initial.nbar);
        j["oscillator_peak_squeezed"] = {{"E_max", squeezed.e_max},
                                         {"t_max", squeezed.t_max},
                                         {"in_regime", squeezed.in_regime}};
        if (s.initial.s_a == s.initial.s_b) {
            j["released_omega_remap"] =
                analytics::squeezed_release_remap(s.omega, s.initial.s_a);
        }
    }
    if (config.has_time && config.time.t_end > 0.0) {
        const double t = config.time.t_end;
        analytics::ReleasedRegime regime;
        const double e = analytics::released_entanglement(t, s.mass_kg, s.omega,
                                                          s.separation_m, s.initial.nbar,
                                                          &regime);
        j["released"] = {{"t", t},
                         {"sigma", analytics::sigma_merit(t, s.mass_kg, s.omega, s.separation_m)},
                         {"E", e},
                         {"width_m", analytics::released_width(t, s.mass_kg, s.omega)},
                         {"eta_ok", regime.eta_ok},
                         {"time_ok", regime.time_ok}};
        json crossings = json::object();
        for (const double threshold : config.output.thresholds) {
            double lo = 0.0, hi = 1.0;
            while (analytics::released_entanglement(hi, s.mass_kg, s.omega, s.separation_m,
                                                    s.initial.nbar) < threshold &&
                   hi < 1e12) {
                hi *= 2.0;
            }
            for (int i = 0; i < 80; ++i) {
                const double mid = 0.5 * (lo + hi);
                (analytics::released_entanglement(mid, s.mass_kg, s.omega, s.separation_m,
                                                  s.initial.nbar) < threshold
                     ? lo
                     : hi) = mid;
            }
            crossings[fmt(threshold)] = hi < 1e12 ? json(hi) : json(nullptr);
        }
        j["released_threshold_crossings"] = crossings;
    }
    return j.dump(2) + "\n";
}

std::string geometry_report_json(const ParsedConfig& config,
                                 const std::vector<double>& alphas,
                                 const std::vector<double>& varsigmas,
                                 const std::vector<double>& trajectory_times) {
    const dynamics::Scenario s = config.make_scenario();
    json j;
    j["schema_version"] = kSchemaVersion;
    j["r1_equal_spheres"] = geometry::rate_equal_spheres(s.mass_kg, s.omega, s.separation_m);
    j["plane_point_coupling"] = geometry::plane_point_coupling();

    json alpha_rates = json::object();
    for (const double alpha : alphas) {
        alpha_rates[fmt(alpha)] = geometry::rate_unequal_spheres(alpha, s.omega);
    }
    j["r2_unequal_spheres"] = alpha_rates;

    json rod_rates = json::object();
    for (const double v : varsigmas) {
        rod_rates[fmt(v)] = geometry::rate_rod_sphere(v, s.omega);
    }
    j["r3_rod_sphere"] = rod_rates;
    const auto optimum = geometry::rod_sphere_optimum();
    j["rod_optimum"] = {{"varsigma", optimum.varsigma},
                        {"f_max", optimum.f_max},
                        {"rate", geometry::rate_rod_sphere(optimum.varsigma, s.omega)}};

    json trajectory = json::object();
    for (const double t : trajectory_times) {
        trajectory[fmt(t)] = geometry::classical_trajectory(s.mass_kg, s.separation_m, t);
    }
    j["classical_trajectory_x"] = trajectory;
    return j.dump(2) + "\n";
}

}  // namespace gravent::cli
