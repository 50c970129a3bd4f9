#include "gravent/environment.hpp"

#include "gravent/analytics.hpp"
#include "gravent/constants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace gravent::environment {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double first_crossing(const dynamics::Scenario& scenario,
                      const dynamics::EntanglementSeries& series, double target_e,
                      const dynamics::IntegrationOptions& integration) {
    const auto& s = series.samples;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i].log_negativity >= target_e) {
            if (i == 0) return s[0].t;
            // Bisect the bracketing interval with fresh propagations.
            double lo = s[i - 1].t;
            double hi = s[i].t;
            for (int iter = 0; iter < 60 && hi - lo > 1e-12 * std::max(hi, 1.0); ++iter) {
                const double mid = 0.5 * (lo + hi);
                const std::array<double, 1> probe{mid};
                const auto sample =
                    dynamics::entanglement_trace(scenario, probe, integration).samples[0];
                (sample.log_negativity >= target_e ? hi : lo) = mid;
            }
            return hi;
        }
    }
    return kInf;
}

}  // namespace

void EnvironmentSpec::validate() const {
    if (!(temperature_k > 0.0)) throw std::invalid_argument("environment: T must be positive");
    if (!(gas_density >= 0.0)) {
        throw std::invalid_argument("environment: gas density must be >= 0");
    }
    if (!(m_air_kg > 0.0)) throw std::invalid_argument("environment: m_air must be positive");
    if (!(casimir_f0 >= 0.0 && casimir_f0 <= 1.0)) {
        throw std::invalid_argument("environment: f0 must lie in [0, 1]");
    }
}

double photon_rate(double radius_m, double temperature_k) {
    if (!(radius_m > 0.0) || !(temperature_k > 0.0)) {
        throw std::invalid_argument("photon_rate: radius and temperature must be positive");
    }
    return 1e36 * std::pow(radius_m, 6) * std::pow(temperature_k, 9);
}

double gas_rate(double radius_m, double temperature_k, double gas_density, double m_air_kg) {
    if (!(radius_m > 0.0) || !(temperature_k > 0.0) || !(m_air_kg > 0.0)) {
        throw std::invalid_argument("gas_rate: radius, temperature and m_air must be positive");
    }
    if (!(gas_density >= 0.0)) throw std::invalid_argument("gas_rate: density must be >= 0");
    const auto& k = constants();
    return 8.0 / (3.0 * k.hbar * k.hbar) * gas_density *
           std::sqrt(2.0 * std::numbers::pi * m_air_kg) * radius_m * radius_m *
           std::pow(k.k_B * temperature_k, 1.5);
}

double coherence_time(double rate, double dx_m) {
    if (!(rate >= 0.0) || !(dx_m >= 0.0)) {
        throw std::invalid_argument("coherence_time: rate and dx must be >= 0");
    }
    const double denom = rate * dx_m * dx_m;
    return denom > 0.0 ? 1.0 / denom : kInf;
}

double casimir_gravity_ratio(double mass_kg, double density, double separation_m, double f0) {
    if (!(mass_kg > 0.0) || !(density > 0.0) || !(separation_m > 0.0)) {
        throw std::invalid_argument("casimir_gravity_ratio: inputs must be positive");
    }
    if (!(f0 >= 0.0 && f0 <= 1.0)) {
        throw std::invalid_argument("casimir_gravity_ratio: f0 must lie in [0, 1]");
    }
    const auto& k = constants();
    const double radius = std::cbrt(3.0 * mass_kg / (4.0 * std::numbers::pi * density));
    const double gap = separation_m - 2.0 * radius;
    if (!(gap > 0.0)) {
        throw std::domain_error("casimir_gravity_ratio: spheres in contact (L <= 2R)");
    }
    const double pi3 = std::pow(std::numbers::pi, 3);
    const double casimir_quadratic = 3.0 * f0 * pi3 * k.hbar * k.c * radius /
                                     (1440.0 * std::pow(gap, 4));
    const double gravity_quadratic =
        k.G * mass_kg * mass_kg / std::pow(separation_m, 3);
    return casimir_quadratic / gravity_quadratic;
}

FeasibilityReport feasibility(const dynamics::Scenario& scenario, const EnvironmentSpec& env,
                              double target_e, const FeasibilityOptions& options) {
    scenario.validate();
    env.validate();
    if (!(target_e >= 0.0)) throw std::invalid_argument("feasibility: target must be >= 0");
    if (!scenario.material_density) {
        throw std::invalid_argument("feasibility: scenario needs a material density");
    }

    const auto& k = constants();
    const dynamics::DerivedRates rates = dynamics::derived_rates(scenario);

    FeasibilityReport report;

    double horizon = options.horizon_s;
    if (horizon <= 0.0) {
        if (scenario.setup == dynamics::SetupKind::Oscillators) {
            const bool squeezed =
                scenario.initial.s_a != 0.0 || scenario.initial.s_b != 0.0;
            const double t_peak =
                squeezed ? std::numbers::pi / (2.0 * rates.eta * scenario.omega)
                         : std::numbers::pi / (2.0 * (1.0 - rates.eta) * scenario.omega);
            horizon = 1.1 * t_peak;
        } else {
            // Invert the closed-form law for a first estimate, then pad.
            double lo = 0.0, hi = 1.0;
            while (analytics::released_entanglement(hi, scenario.mass_kg, scenario.omega,
                                                    scenario.separation_m,
                                                    scenario.initial.nbar) < target_e &&
                   hi < 1e9) {
                hi *= 2.0;
            }
            for (int i = 0; i < 80; ++i) {
                const double mid = 0.5 * (lo + hi);
                (analytics::released_entanglement(mid, scenario.mass_kg, scenario.omega,
                                                  scenario.separation_m,
                                                  scenario.initial.nbar) < target_e
                     ? lo
                     : hi) = mid;
            }
            horizon = std::max(1.5 * hi, 1e-3);
        }
    }
    report.horizon_s = horizon;

    const int n = std::max(options.trace_samples, 8);
    std::vector<double> times(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        times[static_cast<size_t>(i)] = horizon * static_cast<double>(i) / (n - 1);
    }
    const auto series = dynamics::entanglement_trace(scenario, times, options.integration);

    if (target_e == 0.0) {
        report.t_target_s = 0.0;
        report.target_reached = true;
    } else {
        report.t_target_s = first_crossing(scenario, series, target_e, options.integration);
        report.target_reached = std::isfinite(report.t_target_s);
    }

    // Superposition size: root-mean-square width over [0, t_target]. The
    // decoherence exponent accumulates as int Lambda dx(t)^2 dt, so the
    // variance is what gets averaged.
    if (options.dx_override_m) {
        report.dx_used_m = *options.dx_override_m;
    } else {
        const double t_avg = report.target_reached ? report.t_target_s : horizon;
        double acc = 0.0;
        int count = 0;
        for (const auto& sample : series.samples) {
            if (sample.t > t_avg && count > 0) break;
            acc += 0.5 * (sample.width_a_m * sample.width_a_m +
                          sample.width_b_m * sample.width_b_m);
            ++count;
        }
        report.dx_used_m = std::sqrt(acc / std::max(count, 1));
    }

    const double radius = scenario.radius_m();
    const double lambda_ph = photon_rate(radius, env.temperature_k);
    const double lambda_am =
        gas_rate(radius, env.temperature_k, env.gas_density, env.m_air_kg);
    report.tau_photon_s = coherence_time(lambda_ph, report.dx_used_m);
    report.tau_gas_s = coherence_time(lambda_am, report.dx_used_m);
    report.casimir_gravity_ratio = casimir_gravity_ratio(
        scenario.mass_kg, *scenario.material_density, scenario.separation_m, env.casimir_f0);

    // Long-wavelength validity: superposition much smaller than the photon
    // thermal wavelength / the gas de Broglie wavelength.
    const double lambda_photon = k.hbar * k.c / (k.k_B * env.temperature_k);
    const double lambda_gas =
        2.0 * std::numbers::pi * k.hbar /
        std::sqrt(2.0 * std::numbers::pi * env.m_air_kg * k.k_B * env.temperature_k);
    report.photon_wavelength_ok = report.dx_used_m < 0.1 * lambda_photon;
    report.gas_wavelength_ok = report.dx_used_m < 0.1 * lambda_gas;

    report.feasible = report.target_reached &&
                      report.t_target_s < std::min(report.tau_photon_s, report.tau_gas_s) &&
                      report.casimir_gravity_ratio < options.rcg_dominance_threshold;
    return report;
}

}  // namespace gravent::environment
