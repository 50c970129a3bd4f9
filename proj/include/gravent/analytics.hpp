#pragma once

namespace gravent::analytics {

// Closed-form figures of merit and entanglement laws. All pure functions of
// SI inputs; out-of-regime evaluation is allowed and reported through flags
// rather than errors, so parameter sweeps degrade gracefully.

/// Dimensionless coupling eta = 2 G m / (omega^2 L^3).
double eta(double mass_kg, double omega, double separation_m);

/// Same coupling written through the material density for spheres at
/// L = chi R: eta = 8 pi G rho / (3 chi^3 omega^2).
double eta_from_density(double density, double separation_over_radius, double omega);

/// Constant drive frequency nu = G m^2 / sqrt(hbar m omega L^4).
double nu_constant(double mass_kg, double omega, double separation_m);

struct PeakPrediction {
    double e_max = 0.0;  // logarithmic negativity
    double t_max = 0.0;  // seconds
    bool in_regime = true;
};

/// Undamped oscillators from a thermal state: amplitude
/// eta/ln2 - log2(2 nbar + 1), first peak at t = pi / (2 (1 - eta) omega).
PeakPrediction oscillator_peak_thermal(double eta, double omega, double nbar);

/// Squeezed start: amplitude |s_A + s_B|/ln2 - log2(2 nbar + 1), reached at
/// t = pi / (2 eta omega). Flags in_regime = false unless eta << |s_A|, |s_B|.
PeakPrediction oscillator_peak_squeezed(double s_a, double s_b, double eta, double omega,
                                        double nbar);

/// Released-mass figure of merit sigma(t) = 4 G^2 m^2 omega^2 t^6 / (9 L^6).
double sigma_merit(double t, double mass_kg, double omega, double separation_m);

struct ReleasedRegime {
    bool eta_ok = true;   // eta < 1e-2
    bool time_ok = true;  // sqrt(eta) * omega * t < 1e-1
};

/// Closed-form released-mass entanglement
///   E = max{0, E_gnd - log2(2 nbar + 1)},
///   E_gnd = -log2( sqrt(1 + 2 sigma - 2 sqrt(sigma^2 + sigma)) ).
/// Optional regime flags report when the derivation limits are left.
double released_entanglement(double t, double mass_kg, double omega, double separation_m,
                             double nbar, ReleasedRegime* regime = nullptr);

/// Free-mass width law sqrt(hbar / 2 m omega) * sqrt(1 + omega^2 t^2), meters.
double released_width(double t, double mass_kg, double omega);

/// Squeezed release maps onto the unsqueezed law with omega' = omega e^{-2s}
/// (equal squeezing on both masses).
double squeezed_release_remap(double omega, double s);

}  // namespace gravent::analytics
