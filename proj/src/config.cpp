#include "gravent/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gravent::cli {

namespace {

struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
};

std::string trim(std::string_view s) {
    size_t begin = 0;
    size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return std::string(s.substr(begin, end - begin));
}

bool unit_char(unsigned char c) { return std::isalpha(c) != 0 || c >= 0x80; }

// Splits "3.2 kHz" into the number and the unit token (possibly empty).
std::pair<double, std::string> split_number_unit(const std::string& origin, int line,
                                                 const std::string& key,
                                                 const std::string& text) {
    std::string value = trim(text);
    size_t unit_begin = value.size();
    while (unit_begin > 0 && unit_char(static_cast<unsigned char>(value[unit_begin - 1]))) {
        --unit_begin;
    }
    const std::string unit = trim(value.substr(unit_begin));
    const std::string number = trim(value.substr(0, unit_begin));
    if (number.empty()) {
        throw ConfigError(origin, line, key + ": expected a number, got '" + value + "'");
    }
    double parsed = 0.0;
    const char* begin = number.data();
    const char* end = number.data() + number.size();
    const auto [ptr, ec] = std::from_chars(begin, end, parsed);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(origin, line, key + ": cannot parse number '" + number + "'");
    }
    return {parsed, unit};
}

using UnitTable = std::map<std::string, double>;

double parse_value(const std::string& origin, int line, const std::string& key,
                   const std::string& text, const UnitTable& units) {
    const auto [number, unit] = split_number_unit(origin, line, key, text);
    if (unit.empty()) return number;
    const auto found = units.find(unit);
    if (found == units.end()) {
        throw ConfigError(origin, line, key + ": unknown unit '" + unit + "'");
    }
    return number * found->second;
}

const UnitTable kMassUnits = {{"kg", 1.0}, {"g", 1e-3}, {"mg", 1e-6}, {"ug", 1e-9},
                              {"µg", 1e-9}};
const UnitTable kFrequencyUnits = {{"Hz", 1.0}, {"kHz", 1e3}};
const UnitTable kLengthUnits = {{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"µm", 1e-6}};
const UnitTable kTemperatureUnits = {{"K", 1.0}};
const UnitTable kTimeUnits = {{"s", 1.0}};
const UnitTable kNoUnits = {};

std::vector<double> parse_number_list(const std::string& origin, int line,
                                      const std::string& key, const std::string& text) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            throw ConfigError(origin, line, key + ": empty list element");
        }
        values.push_back(parse_value(origin, line, key, item, kNoUnits));
    }
    if (values.empty()) {
        throw ConfigError(origin, line, key + ": expected at least one value");
    }
    return values;
}

const std::set<std::string> kSections = {"scenario", "environment", "time",
                                         "output",   "sweep",       "numerics"};

std::vector<Entry> tokenize(const std::string& text, const std::string& origin) {
    std::vector<Entry> entries;
    std::istringstream stream(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(stream, raw)) {
        ++line;
        if (const size_t hash = raw.find('#'); hash != std::string::npos) {
            raw.erase(hash);
        }
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']') {
                throw ConfigError(origin, line, "unterminated section header");
            }
            section = trim(stripped.substr(1, stripped.size() - 2));
            if (!kSections.count(section)) {
                throw ConfigError(origin, line, "unknown section [" + section + "]");
            }
            continue;
        }
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin, line, "expected 'key = value', got '" + stripped + "'");
        }
        if (section.empty()) {
            throw ConfigError(origin, line, "key outside of any [section]");
        }
        Entry e;
        e.section = section;
        e.key = trim(stripped.substr(0, eq));
        e.value = trim(stripped.substr(eq + 1));
        e.line = line;
        if (e.key.empty()) throw ConfigError(origin, line, "empty key");
        if (e.value.empty()) throw ConfigError(origin, line, "empty value for '" + e.key + "'");
        entries.push_back(std::move(e));
    }
    // Duplicate keys are ambiguous; the repeatable `axis` key is the exception.
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& e : entries) {
        if (e.section == "sweep" && e.key == "axis") continue;
        if (!seen.insert({e.section, e.key}).second) {
            throw ConfigError(origin, e.line,
                              "duplicate key '" + e.key + "' in [" + e.section + "]");
        }
    }
    return entries;
}

void apply_overrides(std::vector<Entry>& entries, const std::vector<std::string>& overrides,
                     const std::string& origin) {
    for (const auto& text : overrides) {
        const size_t eq = text.find('=');
        const size_t dot = text.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
            throw ConfigError(origin, 0,
                              "override must look like section.key=value: '" + text + "'");
        }
        Entry e;
        e.section = trim(text.substr(0, dot));
        e.key = trim(text.substr(dot + 1, eq - dot - 1));
        e.value = trim(text.substr(eq + 1));
        e.line = 0;
        if (!kSections.count(e.section)) {
            throw ConfigError(origin, 0, "override names unknown section [" + e.section + "]");
        }
        const auto match = std::find_if(entries.begin(), entries.end(), [&](const Entry& x) {
            return x.section == e.section && x.key == e.key;
        });
        if (match != entries.end()) {
            match->value = e.value;
        } else {
            entries.push_back(std::move(e));
        }
    }
}

SweepAxis parse_axis(const std::string& origin, int line, const std::string& text) {
    const size_t colon = text.find(':');
    if (colon == std::string::npos) {
        throw ConfigError(origin, line, "axis must look like 'name: v1, v2, ...'");
    }
    SweepAxis axis;
    axis.name = trim(text.substr(0, colon));
    axis.values = parse_number_list(origin, line, "axis " + axis.name, text.substr(colon + 1));
    if (axis.name.empty()) throw ConfigError(origin, line, "axis: empty parameter name");
    return axis;
}

}  // namespace

dynamics::Scenario ScenarioInput::resolve() const {
    dynamics::Scenario scenario;
    scenario.setup = setup;
    scenario.mass_kg = mass_kg;
    scenario.omega = omega;
    scenario.initial = {nbar, s_a, s_b};
    scenario.material_density = density;
    if (separation_is_multiple) {
        if (!density) {
            throw std::invalid_argument(
                "separation given as a multiple of R requires a density");
        }
        scenario.separation_m = separation_value * scenario.radius_m();
    } else {
        scenario.separation_m = separation_value;
    }
    if (q_factor && gamma) {
        throw std::invalid_argument("give either q_factor or gamma, not both");
    }
    if (setup == dynamics::SetupKind::Released) {
        if (q_factor || (gamma && *gamma != 0.0)) {
            throw std::invalid_argument("released masses cannot carry damping");
        }
        scenario.gamma = 0.0;
    } else {
        if (q_factor) {
            if (!(*q_factor > 0.0)) throw std::invalid_argument("q_factor must be positive");
            scenario.gamma = omega / *q_factor;
        } else if (gamma) {
            scenario.gamma = *gamma;
        } else {
            throw std::invalid_argument("oscillators need exactly one of q_factor or gamma");
        }
    }
    scenario.validate();
    return scenario;
}

std::vector<double> TimeGrid::times() const {
    std::vector<double> out(static_cast<size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        out[static_cast<size_t>(i)] =
            samples > 1 ? t_start + (t_end - t_start) * i / (samples - 1) : t_start;
    }
    return out;
}

ParsedConfig parse_config(const std::string& text, const std::string& origin,
                          const std::vector<std::string>& overrides) {
    std::vector<Entry> entries = tokenize(text, origin);
    apply_overrides(entries, overrides, origin);

    ParsedConfig config;
    std::map<std::string, int> lines;  // "section.key" -> line, for late errors
    bool has_separation = false;
    bool has_setup = false, has_mass = false, has_omega = false;
    bool has_t_end = false, has_samples = false;

    for (const auto& e : entries) {
        lines[e.section + "." + e.key] = e.line;
        if (e.section == "scenario") {
            auto& in = config.scenario_input;
            if (e.key == "setup") {
                if (e.value == "oscillators") {
                    in.setup = dynamics::SetupKind::Oscillators;
                } else if (e.value == "released") {
                    in.setup = dynamics::SetupKind::Released;
                } else {
                    throw ConfigError(origin, e.line,
                                      "setup must be 'oscillators' or 'released', got '" +
                                          e.value + "'");
                }
                has_setup = true;
            } else if (e.key == "mass") {
                in.mass_kg = parse_value(origin, e.line, e.key, e.value, kMassUnits);
                has_mass = true;
            } else if (e.key == "omega") {
                in.omega = parse_value(origin, e.line, e.key, e.value, kFrequencyUnits);
                has_omega = true;
            } else if (e.key == "separation") {
                const auto [number, unit] = split_number_unit(origin, e.line, e.key, e.value);
                if (unit == "R") {
                    in.separation_is_multiple = true;
                    in.separation_value = number;
                } else {
                    in.separation_is_multiple = false;
                    const auto found = kLengthUnits.find(unit);
                    if (!unit.empty() && found == kLengthUnits.end()) {
                        throw ConfigError(origin, e.line,
                                          "separation: unknown unit '" + unit + "'");
                    }
                    in.separation_value =
                        unit.empty() ? number : number * found->second;
                }
                has_separation = true;
            } else if (e.key == "density") {
                in.density = parse_value(origin, e.line, e.key, e.value, kNoUnits);
            } else if (e.key == "nbar") {
                in.nbar = parse_value(origin, e.line, e.key, e.value, kNoUnits);
            } else if (e.key == "s_a") {
                in.s_a = parse_value(origin, e.line, e.key, e.value, kNoUnits);
            } else if (e.key == "s_b") {
                in.s_b = parse_value(origin, e.line, e.key, e.value, kNoUnits);
            } else if (e.key == "q_factor") {
                in.q_factor = parse_value(origin, e.line, e.key, e.value, kNoUnits);
            } else if (e.key == "gamma") {
                in.gamma = parse_value(origin, e.line, e.key, e.value, kNoUnits);
            } else {
                throw ConfigError(origin, e.line, "unknown key '" + e.key + "' in [scenario]");
            }
        } else if (e.section == "environment") {
            config.has_environment = true;
            if (e.key == "temperature") {
                config.env.temperature_k =
                    parse_value(origin, e.line, e.key, e.value, kTemperatureUnits);
            } else if (e.key == "gas_density") {
                config.env.gas_density = parse_value(origin, e.line, e.key, e.value, kNoUnits);
            } else if (e.key == "f0") {
                config.env.casimir_f0 = parse_value(origin, e.line, e.key, e.value, kNoUnits);
            } else if (e.key == "m_air") {
                config.env.m_air_kg = parse_value(origin, e.line, e.key, e.value, kMassUnits);
            } else {
                throw ConfigError(origin, e.line,
                                  "unknown key '" + e.key + "' in [environment]");
            }
        } else if (e.section == "time") {
            config.has_time = true;
            if (e.key == "t_start") {
                config.time.t_start = parse_value(origin, e.line, e.key, e.value, kTimeUnits);
            } else if (e.key == "t_end") {
                config.time.t_end = parse_value(origin, e.line, e.key, e.value, kTimeUnits);
                has_t_end = true;
            } else if (e.key == "samples") {
                config.time.samples = static_cast<int>(
                    parse_value(origin, e.line, e.key, e.value, kNoUnits));
                has_samples = true;
            } else {
                throw ConfigError(origin, e.line, "unknown key '" + e.key + "' in [time]");
            }
        } else if (e.section == "output") {
            if (e.key == "series") {
                config.output.series_path = e.value;
            } else if (e.key == "summary") {
                config.output.summary_path = e.value;
            } else if (e.key == "results") {
                config.output.results_path = e.value;
            } else if (e.key == "thresholds") {
                config.output.thresholds = parse_number_list(origin, e.line, e.key, e.value);
            } else {
                throw ConfigError(origin, e.line, "unknown key '" + e.key + "' in [output]");
            }
        } else if (e.section == "sweep") {
            if (e.key == "axis") {
                config.sweep_axes.push_back(parse_axis(origin, e.line, e.value));
            } else if (e.key == "target_e") {
                config.sweep_target_e = parse_value(origin, e.line, e.key, e.value, kNoUnits);
            } else if (e.key == "max_points") {
                config.sweep_max_points = static_cast<long>(
                    parse_value(origin, e.line, e.key, e.value, kNoUnits));
            } else {
                throw ConfigError(origin, e.line, "unknown key '" + e.key + "' in [sweep]");
            }
        } else if (e.section == "numerics") {
            if (e.key == "rel_tol") {
                config.integration.rel_tol = parse_value(origin, e.line, e.key, e.value, kNoUnits);
            } else if (e.key == "abs_tol") {
                config.integration.abs_tol = parse_value(origin, e.line, e.key, e.value, kNoUnits);
            } else {
                throw ConfigError(origin, e.line, "unknown key '" + e.key + "' in [numerics]");
            }
        }
    }

    auto line_of = [&](const std::string& key) {
        const auto found = lines.find(key);
        return found == lines.end() ? 0 : found->second;
    };

    if (!has_setup) throw ConfigError(origin, 0, "missing required key 'setup' in [scenario]");
    if (!has_mass) throw ConfigError(origin, 0, "missing required key 'mass' in [scenario]");
    if (!has_omega) throw ConfigError(origin, 0, "missing required key 'omega' in [scenario]");
    if (!has_separation) {
        throw ConfigError(origin, 0, "missing required key 'separation' in [scenario]");
    }
    if (config.scenario_input.q_factor && config.scenario_input.gamma) {
        throw ConfigError(origin, line_of("scenario.gamma"),
                          "give either q_factor or gamma, not both");
    }
    if (config.has_time) {
        if (!has_t_end) throw ConfigError(origin, 0, "missing 't_end' in [time]");
        if (!has_samples) throw ConfigError(origin, 0, "missing 'samples' in [time]");
        if (config.time.samples < 1) {
            throw ConfigError(origin, line_of("time.samples"), "time grid is empty");
        }
        if (!(config.time.t_end >= config.time.t_start) || !(config.time.t_start >= 0.0)) {
            throw ConfigError(origin, line_of("time.t_end"),
                              "need 0 <= t_start <= t_end in [time]");
        }
        if (config.time.t_end > config.time.t_start && config.time.samples < 2) {
            throw ConfigError(origin, line_of("time.samples"),
                              "a spanning time grid needs at least 2 samples");
        }
    }
    if (config.sweep_axes.size() > 3) {
        throw ConfigError(origin, 0, "at most 3 sweep axes are supported");
    }
    if (!(config.integration.rel_tol > 0.0) || !(config.integration.abs_tol > 0.0)) {
        throw ConfigError(origin, line_of("numerics.rel_tol"),
                          "numerics tolerances must be positive");
    }

    // Resolve now so violated invariants surface as config errors here.
    try {
        config.make_scenario();
        if (config.has_environment) config.env.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(origin, 0, err.what());
    }
    return config;
}

ParsedConfig parse_config_file(const std::string& path,
                               const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path, 0, "cannot open config file");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path, overrides);
}

std::pair<dynamics::Scenario, environment::EnvironmentSpec> parse_scenario(
    const std::string& text, const std::string& origin) {
    const ParsedConfig config = parse_config(text, origin);
    return {config.make_scenario(), config.env};
}

std::string to_config_text(const ParsedConfig& config) {
    std::ostringstream out;
    char buf[40];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    const auto& in = config.scenario_input;
    out << "[scenario]\n";
    out << "setup = "
        << (in.setup == dynamics::SetupKind::Oscillators ? "oscillators" : "released") << "\n";
    out << "mass = " << num(in.mass_kg) << "\n";
    out << "omega = " << num(in.omega) << "\n";
    out << "separation = " << num(in.separation_value)
        << (in.separation_is_multiple ? " R" : "") << "\n";
    if (in.density) out << "density = " << num(*in.density) << "\n";
    out << "nbar = " << num(in.nbar) << "\n";
    out << "s_a = " << num(in.s_a) << "\n";
    out << "s_b = " << num(in.s_b) << "\n";
    if (in.q_factor) out << "q_factor = " << num(*in.q_factor) << "\n";
    if (in.gamma) out << "gamma = " << num(*in.gamma) << "\n";
    if (config.has_environment) {
        out << "\n[environment]\n";
        out << "temperature = " << num(config.env.temperature_k) << "\n";
        out << "gas_density = " << num(config.env.gas_density) << "\n";
        out << "f0 = " << num(config.env.casimir_f0) << "\n";
        out << "m_air = " << num(config.env.m_air_kg) << "\n";
    }
    if (config.has_time) {
        out << "\n[time]\n";
        out << "t_start = " << num(config.time.t_start) << "\n";
        out << "t_end = " << num(config.time.t_end) << "\n";
        out << "samples = " << config.time.samples << "\n";
    }
    const auto& o = config.output;
    if (!o.series_path.empty() || !o.summary_path.empty() || !o.results_path.empty() ||
        !o.thresholds.empty()) {
        out << "\n[output]\n";
        if (!o.series_path.empty()) out << "series = " << o.series_path << "\n";
        if (!o.summary_path.empty()) out << "summary = " << o.summary_path << "\n";
        if (!o.results_path.empty()) out << "results = " << o.results_path << "\n";
        if (!o.thresholds.empty()) {
            out << "thresholds = ";
            for (size_t i = 0; i < o.thresholds.size(); ++i) {
                out << (i ? ", " : "") << num(o.thresholds[i]);
            }
            out << "\n";
        }
    }
    if (!config.sweep_axes.empty() || config.sweep_target_e) {
        out << "\n[sweep]\n";
        for (const auto& axis : config.sweep_axes) {
            out << "axis = " << axis.name << ": ";
            for (size_t i = 0; i < axis.values.size(); ++i) {
                out << (i ? ", " : "") << num(axis.values[i]);
            }
            out << "\n";
        }
        if (config.sweep_target_e) out << "target_e = " << num(*config.sweep_target_e) << "\n";
        out << "max_points = " << config.sweep_max_points << "\n";
    }
    out << "\n[numerics]\n";
    out << "rel_tol = " << num(config.integration.rel_tol) << "\n";
    out << "abs_tol = " << num(config.integration.abs_tol) << "\n";
    return out.str();
}

void apply_axis_value(ParsedConfig& config, const std::string& name, double value) {
    auto& in = config.scenario_input;
    if (name == "mass") {
        in.mass_kg = value;
    } else if (name == "omega") {
        in.omega = value;
    } else if (name == "nbar") {
        in.nbar = value;
    } else if (name == "s_a") {
        in.s_a = value;
    } else if (name == "s_b") {
        in.s_b = value;
    } else if (name == "q_factor") {
        in.q_factor = value;
        in.gamma.reset();
    } else if (name == "gamma") {
        in.gamma = value;
        in.q_factor.reset();
    } else if (name == "density") {
        in.density = value;
    } else if (name == "separation") {
        in.separation_is_multiple = false;
        in.separation_value = value;
    } else if (name == "separation_R") {
        in.separation_is_multiple = true;
        in.separation_value = value;
    } else if (name == "temperature") {
        config.env.temperature_k = value;
    } else if (name == "gas_density") {
        config.env.gas_density = value;
    } else if (name == "f0") {
        config.env.casimir_f0 = value;
    } else {
        throw std::invalid_argument("unknown sweep axis '" + name + "'");
    }
}

}  // namespace gravent::cli
