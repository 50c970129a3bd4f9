#pragma once

// Shared test fixtures: random physical covariance generator, independent
// reference integrators, and finite-difference helpers. Everything here is
// deliberately separate from the library's own numerical paths so it can act
// as an oracle for them.

#include "gravent/constants.hpp"
#include "gravent/cvcore.hpp"
#include "gravent/dynamics.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <random>

namespace gravent::test {

inline constexpr double kOsmiumDensity = 22590.0;  // kg/m^3

inline Eigen::Matrix4d symplectic_form() {
    Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
    omega(0, 1) = 1.0;
    omega(1, 0) = -1.0;
    omega(2, 3) = 1.0;
    omega(3, 2) = -1.0;
    return omega;
}

// Single-mode rotation embedded on the given mode (0 = A, 1 = B).
inline Eigen::Matrix4d local_rotation(int mode, double angle) {
    Eigen::Matrix4d s = Eigen::Matrix4d::Identity();
    const int k = 2 * mode;
    s(k, k) = std::cos(angle);
    s(k, k + 1) = std::sin(angle);
    s(k + 1, k) = -std::sin(angle);
    s(k + 1, k + 1) = std::cos(angle);
    return s;
}

inline Eigen::Matrix4d local_squeeze(int mode, double r) {
    Eigen::Matrix4d s = Eigen::Matrix4d::Identity();
    const int k = 2 * mode;
    s(k, k) = std::exp(r);
    s(k + 1, k + 1) = std::exp(-r);
    return s;
}

inline Eigen::Matrix4d beam_splitter(double angle) {
    Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
    const double c = std::cos(angle);
    const double n = std::sin(angle);
    s.topLeftCorner<2, 2>() = c * Eigen::Matrix2d::Identity();
    s.topRightCorner<2, 2>() = n * Eigen::Matrix2d::Identity();
    s.bottomLeftCorner<2, 2>() = -n * Eigen::Matrix2d::Identity();
    s.bottomRightCorner<2, 2>() = c * Eigen::Matrix2d::Identity();
    return s;
}

inline Eigen::Matrix4d two_mode_squeeze(double r) {
    Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
    const Eigen::Matrix2d z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
    s.topLeftCorner<2, 2>() = std::cosh(r) * Eigen::Matrix2d::Identity();
    s.topRightCorner<2, 2>() = std::sinh(r) * z;
    s.bottomLeftCorner<2, 2>() = std::sinh(r) * z;
    s.bottomRightCorner<2, 2>() = std::cosh(r) * Eigen::Matrix2d::Identity();
    return s;
}

// Random physical state V = S diag(nu1, nu1, nu2, nu2) S^T with a random
// symplectic S composed of local rotations, squeezers, a beam splitter and a
// two-mode squeezer.
inline Eigen::Matrix4d random_physical_covariance(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> squeeze(-1.0, 1.0);
    std::uniform_real_distribution<double> nu(0.5, 4.0);

    Eigen::Matrix4d core = Eigen::Vector4d(nu(rng), 0, nu(rng), 0).asDiagonal();
    core(1, 1) = core(0, 0);
    core(3, 3) = core(2, 2);

    const Eigen::Matrix4d s = local_rotation(0, angle(rng)) * local_rotation(1, angle(rng)) *
                              two_mode_squeeze(0.5 * squeeze(rng)) * beam_splitter(angle(rng)) *
                              local_squeeze(0, squeeze(rng)) * local_squeeze(1, squeeze(rng)) *
                              local_rotation(0, angle(rng)) * local_rotation(1, angle(rng));
    return s * core * s.transpose();
}

// Fixed-step RK4 on dV/dt = K V + V K^T + D; the reference path for the
// adaptive integrator.
inline Eigen::Matrix4d rk4_lyapunov(const Eigen::Matrix4d& drift,
                                    const Eigen::Matrix4d& diffusion, Eigen::Matrix4d v,
                                    double t_end, int steps) {
    const double h = t_end / steps;
    auto rhs = [&](const Eigen::Matrix4d& x) -> Eigen::Matrix4d {
        const Eigen::Matrix4d kx = drift * x;
        return kx + kx.transpose() + diffusion;
    };
    for (int i = 0; i < steps; ++i) {
        const Eigen::Matrix4d k1 = rhs(v);
        const Eigen::Matrix4d k2 = rhs(v + 0.5 * h * k1);
        const Eigen::Matrix4d k3 = rhs(v + 0.5 * h * k2);
        const Eigen::Matrix4d k4 = rhs(v + h * k3);
        v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return v;
}

// Classical two-body fall with the full 1/r potential: both point masses m,
// initial separation l, x(t) = displacement of the left mass. RK4 on (x, v).
inline double two_body_fall(double mass, double l, double t_end, int steps) {
    const double g = gravent::constants().G;
    double x = 0.0;
    double v = 0.0;
    const double h = t_end / steps;
    auto accel = [&](double xi) {
        const double r = l - 2.0 * xi;
        return g * mass / (r * r);
    };
    for (int i = 0; i < steps; ++i) {
        const double k1x = v, k1v = accel(x);
        const double k2x = v + 0.5 * h * k1v, k2v = accel(x + 0.5 * h * k1x);
        const double k3x = v + 0.5 * h * k2v, k3v = accel(x + 0.5 * h * k2x);
        const double k4x = v + h * k3v, k4v = accel(x + h * k3x);
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    return x;
}

// Centered second derivative.
inline double second_derivative(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

// Mixed second derivative d^2 f / dx dy.
inline double mixed_derivative(const std::function<double(double, double)>& f, double x,
                               double y, double h) {
    return (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) /
           (4.0 * h * h);
}

// The standard oscillator test scenario: 1 kg Osmium spheres at L = 2.1 R.
inline dynamics::Scenario osmium_oscillators(double omega, double nbar = 0.0, double s = 0.0,
                                             double gamma = 0.0) {
    dynamics::Scenario scenario;
    scenario.setup = dynamics::SetupKind::Oscillators;
    scenario.mass_kg = 1.0;
    scenario.omega = omega;
    scenario.material_density = kOsmiumDensity;
    scenario.separation_m = 2.1 * scenario.radius_m();
    scenario.gamma = gamma;
    scenario.initial = {nbar, s, s};
    return scenario;
}

// The released-mass reference scenario: 100 ug Osmium spheres at L = 3R,
// omega = 1e5 1/s.
inline dynamics::Scenario released_scenario(double nbar = 0.0) {
    dynamics::Scenario scenario;
    scenario.setup = dynamics::SetupKind::Released;
    scenario.mass_kg = 1e-7;
    scenario.omega = 1e5;
    scenario.material_density = kOsmiumDensity;
    scenario.separation_m = 3.0 * scenario.radius_m();
    scenario.gamma = 0.0;
    scenario.initial = {nbar, 0.0, 0.0};
    return scenario;
}

}  // namespace gravent::test
