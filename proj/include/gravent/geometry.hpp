#pragma once

namespace gravent::geometry {

// Intermodal gravitational interaction rates for alternative mass shapes,
// plus the exact classical two-body trajectory used as an oracle for the
// released-mass dynamics.
//
// Shape conventions follow the reference comparison: Osmium material, equal
// spheres at L = 2.1 R; unequal spheres at L = 2.1 R_A with R_B = alpha R_A
// and spring-like frequency scaling omega_B = omega_A sqrt(m_A / m_B);
// a thin rod (R_B = 0.1 R_A) facing a sphere at L = 1.1 R_A with
// varsigma = 2L/d.

inline constexpr double kOsmiumDensity = 22590.0;  // kg / m^3

/// One shape configuration of the comparison, with its shape parameter.
struct ShapePair {
    enum class Kind { EqualSpheres, UnequalSpheres, RodSphere, PlanePoint };

    Kind kind = Kind::EqualSpheres;
    double alpha = 1.0;     // UnequalSpheres: R_B / R_A, >= 0
    double varsigma = 1.0;  // RodSphere: 2L/d, > 0
    double omega_a = 1.0;   // 1/s
    double density = kOsmiumDensity;
};

/// Intermodal interaction rate of a shape pair under the stated conventions.
double interaction_rate(const ShapePair& pair);

/// Equal spheres: r1 = 2 G m / (omega L^3). Algebraically r1 = eta * omega.
double rate_equal_spheres(double mass_kg, double omega, double separation_m);

/// Unequal spheres, from the quadratic cross-coefficient of the two-body
/// energy under the stated conventions. Reduces to alpha^{9/4} scaling.
double rate_unequal_spheres(double alpha, double omega_a, double density = kOsmiumDensity);

/// Rod facing a sphere, from the second derivative of the rod-sphere
/// gravitational energy under the stated conventions.
double rate_rod_sphere(double varsigma, double omega_a, double density = kOsmiumDensity);

/// Overall rate scale of the rod-sphere configuration (the rate at shape
/// factor 1); rate_rod_sphere == reference * f(varsigma) / omega_a.
double rod_reference_rate(double density = kOsmiumDensity);

/// Dimensionless rod-sphere shape factor f(varsigma).
double rod_shape_factor(double varsigma, double density = kOsmiumDensity);

struct RodSphereOptimum {
    double varsigma = 0.0;
    double f_max = 0.0;
};

/// Numeric maximization of f over varsigma in (0, 100].
RodSphereOptimum rod_sphere_optimum(double density = kOsmiumDensity);

/// Infinite plane and point mass: the energy is linear in x_A - x_B, so the
/// quadratic cross term -- and with it the coupling -- vanishes identically.
double plane_point_coupling();

/// Time for the two point masses to meet, from the implicit trajectory
/// relation evaluated at x -> L/2.
double classical_collision_time(double mass_kg, double separation_m);

/// Displacement x_t of the left mass toward the center after time t, by
/// numeric inversion of the implicit relation
///   t sqrt(2Gm/L) = sqrt(x(L-2x)) + (L / 2 sqrt2)(pi/2 - atan theta(x)),
///   theta = (L - 4x) / sqrt(8 x (L-2x)).
/// The right mass moves by -x_t. Throws std::domain_error past contact.
double classical_trajectory(double mass_kg, double separation_m, double t_s);

}  // namespace gravent::geometry
