#include "gravent/analytics.hpp"

#include "gravent/constants.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gravent::analytics {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0)) {
        throw std::invalid_argument(std::string(name) + " must be positive");
    }
}

double thermal_penalty(double nbar) {
    if (!(nbar >= 0.0)) throw std::invalid_argument("nbar must be >= 0");
    return std::log2(2.0 * nbar + 1.0);
}

}  // namespace

double eta(double mass_kg, double omega, double separation_m) {
    require_positive(mass_kg, "mass");
    require_positive(omega, "omega");
    require_positive(separation_m, "separation");
    const double l3 = separation_m * separation_m * separation_m;
    return 2.0 * constants().G * mass_kg / (omega * omega * l3);
}

double eta_from_density(double density, double separation_over_radius, double omega) {
    require_positive(density, "density");
    require_positive(separation_over_radius, "separation_over_radius");
    require_positive(omega, "omega");
    const double chi3 = std::pow(separation_over_radius, 3);
    return 8.0 * std::numbers::pi * constants().G * density / (3.0 * chi3 * omega * omega);
}

double nu_constant(double mass_kg, double omega, double separation_m) {
    require_positive(mass_kg, "mass");
    require_positive(omega, "omega");
    require_positive(separation_m, "separation");
    const auto& k = constants();
    const double l4 = std::pow(separation_m, 4);
    return k.G * mass_kg * mass_kg / std::sqrt(k.hbar * mass_kg * omega * l4);
}

PeakPrediction oscillator_peak_thermal(double eta, double omega, double nbar) {
    if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("need 0 <= eta < 1");
    require_positive(omega, "omega");
    PeakPrediction peak;
    peak.e_max = std::max(0.0, eta / std::numbers::ln2 - thermal_penalty(nbar));
    peak.t_max = std::numbers::pi / (2.0 * (1.0 - eta) * omega);
    return peak;
}

PeakPrediction oscillator_peak_squeezed(double s_a, double s_b, double eta, double omega,
                                        double nbar) {
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("need 0 < eta < 1");
    require_positive(omega, "omega");
    PeakPrediction peak;
    peak.e_max = std::max(0.0, std::abs(s_a + s_b) / std::numbers::ln2 - thermal_penalty(nbar));
    peak.t_max = std::numbers::pi / (2.0 * eta * omega);
    // The amplitude law assumes s_j >> eta.
    peak.in_regime = std::abs(s_a) > 10.0 * eta && std::abs(s_b) > 10.0 * eta;
    return peak;
}

double sigma_merit(double t, double mass_kg, double omega, double separation_m) {
    require_positive(mass_kg, "mass");
    require_positive(omega, "omega");
    require_positive(separation_m, "separation");
    if (!(t >= 0.0)) throw std::invalid_argument("t must be >= 0");
    const double gm = constants().G * mass_kg;
    const double l3 = separation_m * separation_m * separation_m;
    const double u = gm * omega * t * t * t / (3.0 * l3);
    return 4.0 * u * u;  // 4 G^2 m^2 omega^2 t^6 / (9 L^6)
}

double released_entanglement(double t, double mass_kg, double omega, double separation_m,
                             double nbar, ReleasedRegime* regime) {
    const double sigma = sigma_merit(t, mass_kg, omega, separation_m);
    if (regime) {
        const double e = eta(mass_kg, omega, separation_m);
        regime->eta_ok = e < 1e-2;
        regime->time_ok = std::sqrt(e) * omega * t < 1e-1;
    }
    // 1 + 2 sigma - 2 sqrt(sigma^2 + sigma) == 1 / (1 + 2 sigma + 2 sqrt(sigma^2 + sigma)),
    // which is free of cancellation for every sigma.
    const double e_gnd =
        0.5 * std::log2(1.0 + 2.0 * sigma + 2.0 * std::sqrt(sigma * sigma + sigma));
    return std::max(0.0, e_gnd - thermal_penalty(nbar));
}

double released_width(double t, double mass_kg, double omega) {
    require_positive(mass_kg, "mass");
    require_positive(omega, "omega");
    if (!(t >= 0.0)) throw std::invalid_argument("t must be >= 0");
    const double w0 = std::sqrt(constants().hbar / (2.0 * mass_kg * omega));
    return w0 * std::sqrt(1.0 + omega * omega * t * t);
}

double squeezed_release_remap(double omega, double s) {
    require_positive(omega, "omega");
    return omega * std::exp(-2.0 * s);
}

}  // namespace gravent::analytics
