#pragma once

#include "gravent/dynamics.hpp"

#include <optional>

namespace gravent::environment {

/// Thermal and collisional surroundings of the masses plus the Casimir
/// proximity factor f0 in [0, 1].
struct EnvironmentSpec {
    double temperature_k = 4.0;
    double gas_density = 0.0;    // particles / m^3
    double m_air_kg = 0.5e-25;
    double casimir_f0 = 1.0;

    void validate() const;  // throws std::invalid_argument
};

/// Thermal-photon localization rate Lambda_ph = 1e36 R^6 T^9 [1/(m^2 s)].
/// The prefactor is the empirical constant of the decoherence literature.
double photon_rate(double radius_m, double temperature_k);

/// Gas-collision localization rate
/// Lambda_am = (8 / 3 hbar^2) (N/V) sqrt(2 pi m_air) R^2 (k_B T)^{3/2}.
double gas_rate(double radius_m, double temperature_k, double gas_density,
                double m_air_kg = 0.5e-25);

/// Coherence time tau = 1 / (Lambda dx^2); +inf when either factor is zero.
double coherence_time(double rate, double dx_m);

/// Ratio of the entangling (quadratic) coefficients of the Casimir proximity
/// energy and the Newtonian energy:
///   r_cg = [3 f0 pi^3 hbar c R / 1440 (L-2R)^4] / [G m^2 / L^3].
/// Throws std::domain_error when the spheres touch (L <= 2R).
double casimir_gravity_ratio(double mass_kg, double density, double separation_m, double f0);

struct FeasibilityOptions {
    double horizon_s = 0.0;  // 0 = choose from the scenario's peak-time scale
    std::optional<double> dx_override_m;
    int trace_samples = 600;
    double rcg_dominance_threshold = 0.1;
    dynamics::IntegrationOptions integration{};
};

struct FeasibilityReport {
    double t_target_s = 0.0;
    bool target_reached = false;
    double horizon_s = 0.0;
    double dx_used_m = 0.0;
    double tau_photon_s = 0.0;
    double tau_gas_s = 0.0;
    double casimir_gravity_ratio = 0.0;
    bool photon_wavelength_ok = false;  // dx << thermal photon wavelength
    bool gas_wavelength_ok = false;     // dx << gas de Broglie wavelength
    bool feasible = false;              // t_target < min(tau) and r_cg small
};

/// Compose trace, widths, decoherence rates and the Casimir comparison into
/// one verdict. dx defaults to the root-mean-square width over [0, t_target];
/// an unreachable target is reported, not thrown.
FeasibilityReport feasibility(const dynamics::Scenario& scenario, const EnvironmentSpec& env,
                              double target_e, const FeasibilityOptions& options = {});

}  // namespace gravent::environment
