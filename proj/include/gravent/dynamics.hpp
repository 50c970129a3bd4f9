#pragma once

#include "gravent/cvcore.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace gravent::dynamics {

enum class SetupKind { Oscillators, Released };

/// Full physical description of one experiment. SI units throughout;
/// quadratures become dimensionless only inside the propagation.
struct Scenario {
    SetupKind setup = SetupKind::Oscillators;
    double mass_kg = 0.0;
    double omega = 0.0;         // trap frequency, or initial-spread parameter when released [1/s]
    double separation_m = 0.0;  // center separation L
    double gamma = 0.0;         // damping rate, oscillators only [1/s]
    cvcore::InitialStateSpec initial{};
    std::optional<double> material_density;  // kg/m^3

    void validate() const;      // throws std::invalid_argument
    double radius_m() const;    // sphere radius from mass and density
    double quality_factor() const;  // omega/gamma, +inf for gamma = 0
};

/// Dimensionless gravitational coupling eta = 2Gm/(omega^2 L^3) and the
/// constant drive frequency nu = G m^2 / sqrt(hbar m omega L^4).
struct DerivedRates {
    double eta = 0.0;
    double nu = 0.0;
};

DerivedRates derived_rates(const Scenario& scenario);

/// Drift matrix K, diffusion matrix D and constant drive kappa of the
/// quadrature Langevin equation du = (K u + kappa) dt + noise.
struct Propagator {
    Eigen::Matrix4d drift = Eigen::Matrix4d::Zero();
    Eigen::Matrix4d diffusion = Eigen::Matrix4d::Zero();
    Eigen::Vector4d drive = Eigen::Vector4d::Zero();

    // Context for the exact normal-mode paths.
    SetupKind setup = SetupKind::Oscillators;
    double omega = 0.0;
    double eta = 0.0;
    double gamma = 0.0;

    bool undamped() const { return gamma == 0.0; }
};

/// Oscillator drift/diffusion/drive; rejects eta >= 1 (outside the truncation
/// regime) and scenarios that are not of the oscillator kind.
Propagator build_oscillator_propagator(const Scenario& scenario);

/// Released-mass drift and drive; D = 0. Rejects nonzero damping.
Propagator build_released_propagator(const Scenario& scenario);

/// Dispatch on scenario.setup.
Propagator build_propagator(const Scenario& scenario);

/// Low-level builders used by tests to inject coupling values directly
/// (e.g. the G -> 0 hook).
Propagator make_oscillator_propagator(double omega, double eta, double gamma, double nbar,
                                      double nu);
Propagator make_released_propagator(double omega, double eta, double nu);

/// exp(M t) by Pade-13 scaling and squaring. Throws std::range_error when the
/// result overflows (unstable modes at huge t).
Eigen::Matrix4d matrix_exponential(const Eigen::Matrix4d& m, double t);

struct IntegrationOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    long max_steps = 50'000'000;
};

/// Transition matrix W(t) = exp(K t): exact normal-mode form when gamma = 0,
/// Pade exponential otherwise.
Eigen::Matrix4d transition_matrix(const Propagator& p, double t);

/// Mean quadrature vector <u(t)> = W(t) u0 + int_0^t exp(K s) kappa ds.
Eigen::Vector4d propagate_mean(const Propagator& p, const Eigen::Vector4d& u0, double t);

/// Covariance at time t: exact congruence W V0 W^T when D = 0, adaptive
/// Runge-Kutta integration of dV/dt = K V + V K^T + D otherwise.
cvcore::CovarianceMatrix propagate_covariance(const Propagator& p,
                                              const cvcore::CovarianceMatrix& v0, double t,
                                              const IntegrationOptions& options = {});

/// Means and covariance together.
cvcore::QuadratureState propagate_state(const Propagator& p, const cvcore::QuadratureState& s0,
                                        double t, const IntegrationOptions& options = {});

/// Sequential Lyapunov integrator for damped scenarios; keeps the running
/// covariance so that a time series costs one pass.
class LyapunovIntegrator {
  public:
    LyapunovIntegrator(const Propagator& p, const cvcore::CovarianceMatrix& v0,
                       const IntegrationOptions& options = {});

    /// Advance to time t (must not decrease between calls).
    const Eigen::Matrix4d& advance_to(double t);

    double time() const { return time_; }

  private:
    Propagator propagator_;
    Eigen::Matrix4d value_;
    double time_ = 0.0;
    double step_hint_ = 0.0;
    IntegrationOptions options_;
};

struct TraceSample {
    double t = 0.0;
    double log_negativity = 0.0;
    double nu_tilde_min = 0.0;
    double width_a_m = 0.0;
    double width_b_m = 0.0;
    Eigen::Vector4d mean = Eigen::Vector4d::Zero();  // dimensionless quadratures
};

struct EntanglementSeries {
    std::vector<TraceSample> samples;
};

/// Sample (t, E, nu~_min, widths, means) at the requested times. Times must
/// be ascending and non-negative; propagation failures carry the sample index
/// and time in the exception message.
EntanglementSeries entanglement_trace(const Scenario& scenario, std::span<const double> times,
                                      const IntegrationOptions& options = {});

}  // namespace gravent::dynamics
