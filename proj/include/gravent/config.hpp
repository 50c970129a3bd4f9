#pragma once

#include "gravent/dynamics.hpp"
#include "gravent/environment.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gravent::cli {

/// Parse or validation failure, anchored to a config line.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& origin, int line, const std::string& message)
        : std::runtime_error(origin + ":" + std::to_string(line) + ": " + message),
          line_(line) {}

    int line() const { return line_; }

  private:
    int line_;
};

/// Scenario fields as written in the config: the separation rule and the
/// Q-or-gamma choice stay symbolic so sweeps can re-resolve them after
/// overriding mass, density or omega.
struct ScenarioInput {
    dynamics::SetupKind setup = dynamics::SetupKind::Oscillators;
    double mass_kg = 0.0;
    double omega = 0.0;
    bool separation_is_multiple = false;
    double separation_value = 0.0;  // meters, or multiple of the sphere radius
    std::optional<double> density;
    double nbar = 0.0;
    double s_a = 0.0;
    double s_b = 0.0;
    std::optional<double> q_factor;
    std::optional<double> gamma;

    dynamics::Scenario resolve() const;  // throws std::invalid_argument
};

struct TimeGrid {
    double t_start = 0.0;
    double t_end = 0.0;
    int samples = 0;

    std::vector<double> times() const;
};

struct OutputSpec {
    std::string series_path;
    std::string summary_path;
    std::string results_path;
    std::vector<double> thresholds;
};

struct SweepAxis {
    std::string name;
    std::vector<double> values;
};

struct ParsedConfig {
    ScenarioInput scenario_input;
    environment::EnvironmentSpec env{};
    bool has_environment = false;
    TimeGrid time{};
    bool has_time = false;
    OutputSpec output{};
    std::vector<SweepAxis> sweep_axes;
    std::optional<double> sweep_target_e;
    long sweep_max_points = 20000;
    dynamics::IntegrationOptions integration{};

    dynamics::Scenario make_scenario() const { return scenario_input.resolve(); }
};

/// Parse a config document. `overrides` are "section.key=value" strings that
/// replace (or add) keys before validation.
ParsedConfig parse_config(const std::string& text, const std::string& origin = "<config>",
                          const std::vector<std::string>& overrides = {});

ParsedConfig parse_config_file(const std::string& path,
                               const std::vector<std::string>& overrides = {});

/// Scenario-only entry point: validated scenario plus environment.
std::pair<dynamics::Scenario, environment::EnvironmentSpec> parse_scenario(
    const std::string& text, const std::string& origin = "<config>");

/// Canonical re-emission (SI values); parse(to_config_text(c)) is
/// semantically identical to c.
std::string to_config_text(const ParsedConfig& config);

/// Sweep setter: overrides one named parameter. Throws std::invalid_argument
/// for unknown names.
void apply_axis_value(ParsedConfig& config, const std::string& name, double value);

}  // namespace gravent::cli
