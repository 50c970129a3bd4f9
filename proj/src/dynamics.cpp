#include "gravent/dynamics.hpp"

#include "gravent/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gravent::dynamics {

namespace {

// ---------------------------------------------------------------------------
// Normal-mode machinery. The orthogonal, involutive map
//   T = (1/sqrt2) [[I, I], [I, -I]]   (2x2 blocks)
// takes (A, B) quadratures to center-of-mass and relative modes. Both drift
// matrices in this artifact block-diagonalize under T into 2x2 blocks of the
// form M = [[0, w], [-w q, -g]]; with g = 0 they admit trig/hyperbolic closed
// forms through the sign of q.
// ---------------------------------------------------------------------------

Eigen::Matrix4d normal_mode_map() {
    Eigen::Matrix4d t = Eigen::Matrix4d::Zero();
    const double r = 1.0 / std::numbers::sqrt2;
    t(0, 0) = t(0, 2) = r;
    t(1, 1) = t(1, 3) = r;
    t(2, 0) = r;
    t(2, 2) = -r;
    t(3, 1) = r;
    t(3, 3) = -r;
    return t;
}

struct ModeScalars {
    double c;   // cos(W t), cosh(L t) or 1
    double s;   // sin(W t)/W, sinh(L t)/L or t          (= int_0^t c)
    double s2;  // (1-cos)/W^2, (cosh-1)/L^2 or t^2/2    (= int_0^t s)
};

ModeScalars mode_scalars(double w, double q, double t) {
    const double wq = w * std::sqrt(std::abs(q));
    const double x = wq * t;
    ModeScalars m{};
    if (wq == 0.0 || q == 0.0) {
        m.c = 1.0;
        m.s = t;
        m.s2 = t * t / 2.0;
    } else if (q > 0.0) {
        m.c = std::cos(x);
        m.s = std::sin(x) / wq;
        const double h = std::sin(x / 2.0) / wq;
        m.s2 = 2.0 * h * h;
    } else {
        m.c = std::cosh(x);
        m.s = std::sinh(x) / wq;
        const double h = std::sinh(x / 2.0) / wq;
        m.s2 = 2.0 * h * h;
    }
    return m;
}

// exp(M t) for M = [[0, w], [-w q, 0]].
Eigen::Matrix2d mode_transition(double w, double q, double t) {
    const ModeScalars m = mode_scalars(w, q, t);
    Eigen::Matrix2d out;
    out << m.c, w * m.s, -w * q * m.s, m.c;
    return out;
}

// int_0^t exp(M s) ds for the same block.
Eigen::Matrix2d mode_phi1(double w, double q, double t) {
    const ModeScalars m = mode_scalars(w, q, t);
    Eigen::Matrix2d out;
    out << m.s, w * m.s2, -w * q * m.s2, m.s;
    return out;
}

struct ModeSplit {
    double q_com;
    double q_rel;
};

ModeSplit mode_split(const Propagator& p) {
    if (p.setup == SetupKind::Oscillators) {
        return {1.0, 1.0 - 2.0 * p.eta};
    }
    return {0.0, -2.0 * p.eta};
}

Eigen::Matrix4d exact_transition(const Propagator& p, double t) {
    const ModeSplit split = mode_split(p);
    Eigen::Matrix4d block = Eigen::Matrix4d::Zero();
    block.topLeftCorner<2, 2>() = mode_transition(p.omega, split.q_com, t);
    block.bottomRightCorner<2, 2>() = mode_transition(p.omega, split.q_rel, t);
    const Eigen::Matrix4d map = normal_mode_map();
    return map * block * map;
}

Eigen::Matrix4d exact_phi1(const Propagator& p, double t) {
    const ModeSplit split = mode_split(p);
    Eigen::Matrix4d block = Eigen::Matrix4d::Zero();
    block.topLeftCorner<2, 2>() = mode_phi1(p.omega, split.q_com, t);
    block.bottomRightCorner<2, 2>() = mode_phi1(p.omega, split.q_rel, t);
    const Eigen::Matrix4d map = normal_mode_map();
    return map * block * map;
}

// ---------------------------------------------------------------------------
// Matrix exponential: Pade-13 with scaling and squaring (Higham 2005).
// ---------------------------------------------------------------------------

Eigen::MatrixXd expm_pade13(Eigen::MatrixXd a) {
    static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;

    const Eigen::Index n = a.rows();
    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
    int squarings = 0;
    if (norm > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
        squarings = std::min(squarings, 1074);
        a /= std::pow(2.0, squarings);
    }

    const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd a2 = a * a;
    const Eigen::MatrixXd a4 = a2 * a2;
    const Eigen::MatrixXd a6 = a4 * a2;

    const Eigen::MatrixXd u =
        a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
             b[1] * ident);
    const Eigen::MatrixXd v =
        a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
        b[0] * ident;

    Eigen::MatrixXd r = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i) r = r * r;
    return r;
}

// ---------------------------------------------------------------------------
// Adaptive Dormand-Prince 5(4) on the 10 independent covariance entries.
// The packed representation keeps V symmetric by construction.
// ---------------------------------------------------------------------------

using Packed = Eigen::Matrix<double, 10, 1>;

Packed pack(const Eigen::Matrix4d& v) {
    Packed y;
    int k = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) y(k++) = v(i, j);
    return y;
}

Eigen::Matrix4d unpack(const Packed& y) {
    Eigen::Matrix4d v;
    int k = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            v(i, j) = y(k);
            v(j, i) = y(k);
            ++k;
        }
    return v;
}

Packed lyapunov_rhs(const Propagator& p, const Packed& y) {
    const Eigen::Matrix4d v = unpack(y);
    const Eigen::Matrix4d kv = p.drift * v;
    return pack(kv + kv.transpose() + p.diffusion);
}

struct DormandPrince {
    // Classic DP5(4) tableau.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
};

// Advances y over [t0, t1]; returns the updated step-size hint.
double integrate_lyapunov(const Propagator& p, Packed& y, double t0, double t1, double h_hint,
                          const IntegrationOptions& opt) {
    using DP = DormandPrince;
    const double span = t1 - t0;
    if (span == 0.0) return h_hint;

    double t = t0;
    double h = h_hint > 0.0 ? std::min(h_hint, span) : span / 16.0;
    Packed k1 = lyapunov_rhs(p, y);  // FSAL
    long steps = 0;

    while (t < t1) {
        h = std::min(h, t1 - t);
        if (!(h > 0.0) || t + h == t) {
            throw std::runtime_error("covariance integration failed: step size underflow at t=" +
                                     std::to_string(t));
        }
        if (++steps > opt.max_steps) {
            throw std::runtime_error("covariance integration failed: step budget exhausted");
        }

        const Packed k2 = lyapunov_rhs(p, y + h * DP::a21 * k1);
        const Packed k3 = lyapunov_rhs(p, y + h * (DP::a31 * k1 + DP::a32 * k2));
        const Packed k4 = lyapunov_rhs(p, y + h * (DP::a41 * k1 + DP::a42 * k2 + DP::a43 * k3));
        const Packed k5 = lyapunov_rhs(
            p, y + h * (DP::a51 * k1 + DP::a52 * k2 + DP::a53 * k3 + DP::a54 * k4));
        const Packed k6 = lyapunov_rhs(
            p,
            y + h * (DP::a61 * k1 + DP::a62 * k2 + DP::a63 * k3 + DP::a64 * k4 + DP::a65 * k5));
        const Packed y5 =
            y + h * (DP::b1 * k1 + DP::b3 * k3 + DP::b4 * k4 + DP::b5 * k5 + DP::b6 * k6);
        const Packed k7 = lyapunov_rhs(p, y5);
        const Packed err = h * (DP::e1 * k1 + DP::e3 * k3 + DP::e4 * k4 + DP::e5 * k5 +
                                DP::e6 * k6 + DP::e7 * k7);

        double err_norm = 0.0;
        for (int i = 0; i < 10; ++i) {
            const double tol =
                opt.abs_tol + opt.rel_tol * std::max(std::abs(y(i)), std::abs(y5(i)));
            const double r = err(i) / tol;
            err_norm += r * r;
        }
        err_norm = std::sqrt(err_norm / 10.0);

        if (err_norm <= 1.0) {
            t += h;
            y = y5;
            k1 = k7;
        }
        const double factor =
            err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
    return h;
}

void check_times(std::span<const double> times) {
    double prev = 0.0;
    for (size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0)) {
            throw std::invalid_argument("trace times must be non-negative");
        }
        if (i > 0 && times[i] < prev) {
            throw std::invalid_argument("trace times must be ascending");
        }
        prev = times[i];
    }
}

}  // namespace

void Scenario::validate() const {
    if (!(mass_kg > 0.0)) throw std::invalid_argument("scenario: mass must be positive");
    if (!(omega > 0.0)) throw std::invalid_argument("scenario: omega must be positive");
    if (!(separation_m > 0.0)) throw std::invalid_argument("scenario: separation must be positive");
    if (!(gamma >= 0.0)) throw std::invalid_argument("scenario: gamma must be >= 0");
    if (setup == SetupKind::Released && gamma != 0.0) {
        throw std::invalid_argument("scenario: released masses cannot carry damping");
    }
    if (!(initial.nbar >= 0.0)) throw std::invalid_argument("scenario: nbar must be >= 0");
    if (material_density) {
        if (!(*material_density > 0.0)) {
            throw std::invalid_argument("scenario: density must be positive");
        }
        if (separation_m <= 2.0 * radius_m()) {
            throw std::invalid_argument("scenario: spheres overlap (need L > 2R)");
        }
    }
}

double Scenario::radius_m() const {
    if (!material_density) {
        throw std::invalid_argument("scenario: radius requires a material density");
    }
    return std::cbrt(3.0 * mass_kg / (4.0 * std::numbers::pi * *material_density));
}

double Scenario::quality_factor() const {
    return gamma > 0.0 ? omega / gamma : std::numeric_limits<double>::infinity();
}

DerivedRates derived_rates(const Scenario& scenario) {
    const auto& k = constants();
    const double m = scenario.mass_kg;
    const double w = scenario.omega;
    const double l = scenario.separation_m;
    DerivedRates rates;
    rates.eta = 2.0 * k.G * m / (w * w * l * l * l);
    rates.nu = k.G * m * m / std::sqrt(k.hbar * m * w * l * l * l * l);
    return rates;
}

Propagator make_oscillator_propagator(double omega, double eta, double gamma, double nbar,
                                      double nu) {
    Propagator p;
    p.setup = SetupKind::Oscillators;
    p.omega = omega;
    p.eta = eta;
    p.gamma = gamma;

    p.drift << 0.0, omega, 0.0, 0.0,                          //
        -omega * (1.0 - eta), -gamma, -omega * eta, 0.0,      //
        0.0, 0.0, 0.0, omega,                                 //
        -omega * eta, 0.0, -omega * (1.0 - eta), -gamma;

    const double d = gamma * (2.0 * nbar + 1.0);
    p.diffusion.diagonal() << 0.0, d, 0.0, d;
    p.drive << 0.0, nu, 0.0, -nu;
    return p;
}

Propagator make_released_propagator(double omega, double eta, double nu) {
    Propagator p;
    p.setup = SetupKind::Released;
    p.omega = omega;
    p.eta = eta;
    p.gamma = 0.0;

    p.drift << 0.0, omega, 0.0, 0.0,            //
        omega * eta, 0.0, -omega * eta, 0.0,    //
        0.0, 0.0, 0.0, omega,                   //
        -omega * eta, 0.0, omega * eta, 0.0;

    p.drive << 0.0, nu, 0.0, -nu;
    return p;
}

Propagator build_oscillator_propagator(const Scenario& scenario) {
    if (scenario.setup != SetupKind::Oscillators) {
        throw std::invalid_argument("build_oscillator_propagator: scenario is not oscillators");
    }
    scenario.validate();
    const DerivedRates rates = derived_rates(scenario);
    if (rates.eta >= 1.0) {
        throw std::invalid_argument("oscillator coupling eta >= 1: outside the truncation regime");
    }
    return make_oscillator_propagator(scenario.omega, rates.eta, scenario.gamma,
                                      scenario.initial.nbar, rates.nu);
}

Propagator build_released_propagator(const Scenario& scenario) {
    if (scenario.setup != SetupKind::Released) {
        throw std::invalid_argument("build_released_propagator: scenario is not released");
    }
    if (scenario.gamma != 0.0) {
        throw std::invalid_argument("released masses cannot carry damping");
    }
    scenario.validate();
    const DerivedRates rates = derived_rates(scenario);
    if (rates.eta >= 1.0) {
        throw std::invalid_argument("coupling eta >= 1: outside the truncation regime");
    }
    return make_released_propagator(scenario.omega, rates.eta, rates.nu);
}

Propagator build_propagator(const Scenario& scenario) {
    return scenario.setup == SetupKind::Oscillators ? build_oscillator_propagator(scenario)
                                                    : build_released_propagator(scenario);
}

Eigen::Matrix4d matrix_exponential(const Eigen::Matrix4d& m, double t) {
    if (!m.allFinite() || !std::isfinite(t)) {
        throw std::invalid_argument("matrix_exponential: non-finite input");
    }
    const Eigen::MatrixXd result = expm_pade13(Eigen::MatrixXd(m * t));
    if (!result.allFinite()) {
        throw std::range_error("matrix_exponential overflowed (norm(M t) = " +
                               std::to_string((m * t).cwiseAbs().maxCoeff()) + ")");
    }
    return result;
}

Eigen::Matrix4d transition_matrix(const Propagator& p, double t) {
    if (p.undamped()) return exact_transition(p, t);
    return matrix_exponential(p.drift, t);
}

Eigen::Vector4d propagate_mean(const Propagator& p, const Eigen::Vector4d& u0, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("propagate_mean: t must be >= 0");
    if (p.undamped()) {
        return exact_transition(p, t) * u0 + exact_phi1(p, t) * p.drive;
    }
    // Augmented exponential: exp([[K, kappa],[0,0]] t) carries both W(t) and
    // the drive integral int_0^t exp(K s) kappa ds in its last column.
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(5, 5);
    aug.topLeftCorner<4, 4>() = p.drift;
    aug.topRightCorner<4, 1>() = p.drive;
    const Eigen::MatrixXd w = expm_pade13(aug * t);
    if (!w.allFinite()) {
        throw std::range_error("propagate_mean: transition overflowed");
    }
    return w.topLeftCorner<4, 4>() * u0 + w.topRightCorner<4, 1>();
}

cvcore::CovarianceMatrix propagate_covariance(const Propagator& p,
                                              const cvcore::CovarianceMatrix& v0, double t,
                                              const IntegrationOptions& options) {
    if (!(t >= 0.0)) throw std::invalid_argument("propagate_covariance: t must be >= 0");
    if (p.undamped()) {
        const Eigen::Matrix4d w = exact_transition(p, t);
        return cvcore::CovarianceMatrix(w * v0.matrix() * w.transpose());
    }
    Packed y = pack(v0.matrix());
    integrate_lyapunov(p, y, 0.0, t, 0.0, options);
    return cvcore::CovarianceMatrix(unpack(y));
}

cvcore::QuadratureState propagate_state(const Propagator& p, const cvcore::QuadratureState& s0,
                                        double t, const IntegrationOptions& options) {
    return {propagate_mean(p, s0.mean, t), propagate_covariance(p, s0.cov, t, options)};
}

LyapunovIntegrator::LyapunovIntegrator(const Propagator& p, const cvcore::CovarianceMatrix& v0,
                                       const IntegrationOptions& options)
    : propagator_(p), value_(v0.matrix()), options_(options) {}

const Eigen::Matrix4d& LyapunovIntegrator::advance_to(double t) {
    if (t < time_) {
        throw std::invalid_argument("LyapunovIntegrator: time must not decrease");
    }
    Packed y = pack(value_);
    step_hint_ = integrate_lyapunov(propagator_, y, time_, t, step_hint_, options_);
    value_ = unpack(y);
    time_ = t;
    return value_;
}

EntanglementSeries entanglement_trace(const Scenario& scenario, std::span<const double> times,
                                      const IntegrationOptions& options) {
    check_times(times);
    const Propagator p = build_propagator(scenario);
    const cvcore::CovarianceMatrix v0 = cvcore::thermal_squeezed_covariance(scenario.initial);

    EntanglementSeries series;
    series.samples.reserve(times.size());

    std::optional<LyapunovIntegrator> integrator;
    if (!p.undamped()) integrator.emplace(p, v0, options);
    // The exact congruence conserves det V; the conserved value is far more
    // accurate than anything recoverable from the spread-dominated entries.
    const double det0 = v0.determinant();

    for (size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        try {
            Eigen::Matrix4d vt;
            if (p.undamped()) {
                const Eigen::Matrix4d w = exact_transition(p, t);
                vt = w * v0.matrix() * w.transpose();
            } else {
                vt = integrator->advance_to(t);
            }
            const cvcore::CovarianceMatrix cov(vt);
            TraceSample sample;
            sample.t = t;
            sample.nu_tilde_min =
                p.undamped() ? cvcore::min_ptranspose_symplectic_eigenvalue(cov, det0)
                             : cvcore::min_ptranspose_symplectic_eigenvalue(cov);
            sample.log_negativity = std::max(0.0, -std::log2(2.0 * sample.nu_tilde_min));
            sample.width_a_m =
                cvcore::width_meters(cov, cvcore::Mode::A, scenario.mass_kg, scenario.omega);
            sample.width_b_m =
                cvcore::width_meters(cov, cvcore::Mode::B, scenario.mass_kg, scenario.omega);
            sample.mean = propagate_mean(p, Eigen::Vector4d::Zero(), t);
            series.samples.push_back(sample);
        } catch (const std::exception& e) {
            throw std::runtime_error("trace sample " + std::to_string(i) + " at t=" +
                                     std::to_string(t) + " failed: " + e.what());
        }
    }
    return series;
}

}  // namespace gravent::dynamics
