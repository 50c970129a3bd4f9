#include "gravent/geometry.hpp"

#include "gravent/constants.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gravent::geometry {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0)) {
        throw std::invalid_argument(std::string(name) + " must be positive");
    }
}

double sphere_mass(double radius, double density) {
    return 4.0 / 3.0 * std::numbers::pi * density * radius * radius * radius;
}

// Second derivative (with respect to the gap coordinate) of the geometric
// part of the rod-sphere energy H = -2 G m_A lambda_B g(L'), with
// g(x) = ln((d/2 + sqrt((d/2)^2 + x^2)) / x).
double rod_g_second(double x, double d) {
    const double half = d / 2.0;
    const double s = std::sqrt(half * half + x * x);
    const double numerator = s * s * (half + s) - x * x * (half + 2.0 * s);
    const double denominator = s * s * s * (half + s) * (half + s);
    return numerator / denominator + 1.0 / (x * x);
}

struct RodConventions {
    double length;       // L = 1.1 R_A (R_A = 1)
    double mass_a;
    double line_density;  // lambda_B for a thin rod of radius 0.1 R_A
};

RodConventions rod_conventions(double density) {
    RodConventions c;
    c.length = 1.1;
    c.mass_a = sphere_mass(1.0, density);
    c.line_density = density * std::numbers::pi * 0.1 * 0.1;
    return c;
}

// RHS of the implicit trajectory relation, in length units.
double trajectory_rhs(double x, double separation) {
    const double l = separation;
    const double prod = x * (l - 2.0 * x);
    const double root = std::sqrt(std::max(prod, 0.0));
    // pi/2 - atan(theta) written as atan2(1, theta): exact for both signs and
    // well conditioned as theta -> +-inf.
    const double theta_angle =
        root > 0.0 ? std::atan2(1.0, (l - 4.0 * x) / std::sqrt(8.0 * prod))
                   : (x <= 0.0 ? 0.0 : std::numbers::pi);
    return root + l / (2.0 * std::numbers::sqrt2) * theta_angle;
}

}  // namespace

double interaction_rate(const ShapePair& pair) {
    switch (pair.kind) {
        case ShapePair::Kind::EqualSpheres:
            return rate_unequal_spheres(1.0, pair.omega_a, pair.density);
        case ShapePair::Kind::UnequalSpheres:
            return rate_unequal_spheres(pair.alpha, pair.omega_a, pair.density);
        case ShapePair::Kind::RodSphere:
            return rate_rod_sphere(pair.varsigma, pair.omega_a, pair.density);
        case ShapePair::Kind::PlanePoint:
            return plane_point_coupling();
    }
    throw std::invalid_argument("unknown shape kind");
}

double rate_equal_spheres(double mass_kg, double omega, double separation_m) {
    require_positive(mass_kg, "mass");
    require_positive(omega, "omega");
    require_positive(separation_m, "separation");
    return 2.0 * constants().G * mass_kg / (omega * std::pow(separation_m, 3));
}

double rate_unequal_spheres(double alpha, double omega_a, double density) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
    require_positive(omega_a, "omega_a");
    require_positive(density, "density");
    if (alpha == 0.0) return 0.0;

    // R_A = 1 with L = 2.1 R_A; the radius drops out of the rate.
    const double mass_a = sphere_mass(1.0, density);
    const double mass_b = sphere_mass(alpha, density);
    const double separation = 2.1;
    const double cross =
        2.0 * constants().G * mass_a * mass_b / std::pow(separation, 3);
    const double omega_b = omega_a * std::sqrt(mass_a / mass_b);
    return cross / std::sqrt(mass_a * omega_a * mass_b * omega_b);
}

double rate_rod_sphere(double varsigma, double omega_a, double density) {
    require_positive(varsigma, "varsigma");
    require_positive(omega_a, "omega_a");
    require_positive(density, "density");

    const RodConventions c = rod_conventions(density);
    const double d = 2.0 * c.length / varsigma;
    const double mass_b = c.line_density * d;
    const double cross =
        2.0 * constants().G * c.mass_a * c.line_density * rod_g_second(c.length, d);
    const double omega_b = omega_a * std::sqrt(c.mass_a / mass_b);
    return cross / std::sqrt(c.mass_a * omega_a * mass_b * omega_b);
}

double rod_reference_rate(double density) {
    require_positive(density, "density");
    const RodConventions c = rod_conventions(density);
    // Pulling varsigma^{1/4} L^2 g'' out of the rate leaves this prefactor.
    return 2.0 * constants().G * std::pow(c.line_density, 0.75) * std::pow(c.mass_a, 0.25) /
           (std::pow(2.0 * c.length, 0.25) * c.length * c.length);
}

double rod_shape_factor(double varsigma, double density) {
    return rate_rod_sphere(varsigma, 1.0, density) / rod_reference_rate(density);
}

RodSphereOptimum rod_sphere_optimum(double density) {
    // Coarse scan to bracket the single hump, then golden-section refinement.
    double best_v = 1.0;
    double best_f = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double v = std::pow(10.0, -2.0 + 4.0 * i / 2000.0);  // 0.01 .. 100
        if (v > 100.0) break;
        const double f = rod_shape_factor(v, density);
        if (f > best_f) {
            best_f = f;
            best_v = v;
        }
    }
    double lo = best_v / 1.2;
    double hi = std::min(best_v * 1.2, 100.0);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = rod_shape_factor(x1, density);
    double f2 = rod_shape_factor(x2, density);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = rod_shape_factor(x2, density);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = rod_shape_factor(x1, density);
        }
    }
    RodSphereOptimum optimum;
    optimum.varsigma = 0.5 * (lo + hi);
    optimum.f_max = rod_shape_factor(optimum.varsigma, density);
    return optimum;
}

double plane_point_coupling() { return 0.0; }

double classical_collision_time(double mass_kg, double separation_m) {
    require_positive(mass_kg, "mass");
    require_positive(separation_m, "separation");
    const double scale = std::sqrt(2.0 * constants().G * mass_kg / separation_m);
    return trajectory_rhs(separation_m / 2.0, separation_m) / scale;
}

double classical_trajectory(double mass_kg, double separation_m, double t_s) {
    require_positive(mass_kg, "mass");
    require_positive(separation_m, "separation");
    if (!(t_s >= 0.0)) throw std::invalid_argument("t must be >= 0");
    if (t_s == 0.0) return 0.0;

    const double g = constants().G;
    const double l = separation_m;
    const double scale = std::sqrt(2.0 * g * mass_kg / l);
    const double target = t_s * scale;  // length units

    if (t_s >= classical_collision_time(mass_kg, separation_m)) {
        throw std::domain_error("classical_trajectory: masses in contact before t");
    }

    double lo = 0.0;
    double hi = l / 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-18 * l; ++i) {
        const double mid = 0.5 * (lo + hi);
        (trajectory_rhs(mid, l) < target ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);

    // Newton polish; dT/dx = 1/v with v from energy conservation.
    for (int i = 0; i < 8; ++i) {
        const double r = l - 2.0 * x;
        if (!(r > 0.0) || !(x > 0.0)) break;
        const double v = std::sqrt(g * mass_kg * (1.0 / r - 1.0 / l));
        if (!(v > 0.0)) break;
        const double residual = trajectory_rhs(x, l) - target;  // length units
        const double step = residual * v / scale;
        const double next = x - step;
        if (next <= lo || next >= hi) break;
        x = next;
        if (std::abs(residual) < 1e-14 * l) break;
    }
    return x;
}

}  // namespace gravent::geometry
