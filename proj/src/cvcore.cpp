#include "gravent/cvcore.hpp"

#include "gravent/constants.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace gravent::cvcore {

namespace {

constexpr double kSymmetryTol = 1e-12;

double max_abs(const Eigen::Matrix4d& m) { return m.cwiseAbs().maxCoeff(); }

double det2(const Eigen::Matrix2d& m) {
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

// Determinant through the plus/minus mode split. Spread-dominated states
// store the small relative-mode variances as near-cancelling combinations of
// huge entries; the congruence with (1/sqrt2)[[I, I],[I, -I]] separates them,
// and its blocks (A+B+L+L^T)/2 etc. are formed with exact sums and halvings
// so that symmetric scenarios keep an exactly vanishing cross block.
double stable_det4(const Eigen::Matrix4d& v) {
    const Eigen::Matrix2d a = v.topLeftCorner<2, 2>();
    const Eigen::Matrix2d b = v.bottomRightCorner<2, 2>();
    const Eigen::Matrix2d l = v.topRightCorner<2, 2>();

    const Eigen::Matrix2d jcc = 0.5 * (a + b + l + l.transpose());
    const Eigen::Matrix2d jrr = 0.5 * (a + b - l - l.transpose());
    const Eigen::Matrix2d jcr = 0.5 * (a - b - l + l.transpose());
    const Eigen::Matrix2d jrc = jcr.transpose();

    const double det_cc = det2(jcc);
    const double scale = jcc.cwiseAbs().maxCoeff();
    if (scale > 0.0 && std::abs(det_cc) > 1e-12 * scale * scale) {
        Eigen::Matrix2d inv;
        inv << jcc(1, 1), -jcc(0, 1), -jcc(1, 0), jcc(0, 0);
        inv /= det_cc;
        const Eigen::Matrix2d schur = jrr - jrc * inv * jcr;
        return det_cc * det2(schur);
    }
    return v.determinant();
}

// Both squared symplectic eigenvalues from the two-mode invariants
// Delta = det I_A + det I_B + s * 2 det L (s = -1 selects the partial
// transpose) and det V. Uses the cancellation-free quotient form for the
// smaller root.
std::pair<double, double> invariant_roots(const CovarianceMatrix& v, double cross_sign,
                                          double det_v) {
    const double det_a = det2(v.block_a());
    const double det_b = det2(v.block_b());
    const double det_l = det2(v.block_cross());
    const double sigma = det_a + det_b + cross_sign * 2.0 * det_l;

    double disc = sigma * sigma - 4.0 * det_v;
    const double scale = std::max({sigma * sigma, std::abs(4.0 * det_v), 1e-300});
    if (disc < 0.0) {
        // Degenerate nu-pairs land here through round-off of the block
        // determinants, whose cancellation error grows with the fourth power
        // of the entry scale; anything beyond that allowance is a genuine
        // error.
        const double entry = std::max(1.0, v.matrix().cwiseAbs().maxCoeff());
        const double allowance = 1e-5 * scale + 1024.0 * std::numeric_limits<double>::epsilon() *
                                                    entry * entry * entry * entry;
        if (-disc > allowance) {
            throw std::domain_error("symplectic invariant discriminant is negative");
        }
        disc = 0.0;
    }
    const double root = std::sqrt(disc);
    const double hi2 = (sigma + root) / 2.0;
    double lo2 = hi2 > 0.0 ? det_v / hi2 : (sigma - root) / 2.0;
    lo2 = std::max(lo2, 0.0);
    return {lo2, std::max(hi2, 0.0)};
}

}  // namespace

double CovarianceMatrix::determinant() const { return stable_det4(entries_); }

CovarianceMatrix::CovarianceMatrix(const Eigen::Matrix4d& entries) {
    if (!entries.allFinite()) {
        throw std::invalid_argument("covariance matrix has non-finite entries");
    }
    const double scale = std::max(max_abs(entries), 1e-300);
    const double asym = max_abs(entries - entries.transpose());
    if (asym > kSymmetryTol * scale) {
        throw std::invalid_argument("covariance matrix is not symmetric (relative asymmetry " +
                                    std::to_string(asym / scale) + ")");
    }
    entries_ = 0.5 * (entries + entries.transpose());
}

QuadratureState::QuadratureState(const Eigen::Vector4d& mean_in, CovarianceMatrix cov_in)
    : mean(mean_in), cov(std::move(cov_in)) {
    if (!mean.allFinite()) {
        throw std::invalid_argument("quadrature state has a non-finite mean");
    }
}

CovarianceMatrix thermal_squeezed_covariance(const InitialStateSpec& spec) {
    if (!(spec.nbar >= 0.0)) {
        throw std::invalid_argument("nbar must be >= 0");
    }
    const double v = (2.0 * spec.nbar + 1.0) / 2.0;
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 0) = v * std::exp(2.0 * spec.s_a);
    m(1, 1) = v * std::exp(-2.0 * spec.s_a);
    m(2, 2) = v * std::exp(2.0 * spec.s_b);
    m(3, 3) = v * std::exp(-2.0 * spec.s_b);
    return CovarianceMatrix(m);
}

std::pair<double, double> symplectic_eigenvalues(const CovarianceMatrix& v) {
    Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
    omega(0, 1) = 1.0;
    omega(1, 0) = -1.0;
    omega(2, 3) = 1.0;
    omega(3, 2) = -1.0;

    // The eigenvalues of i*Omega*V come in pairs +-nu; take the moduli of the
    // complex spectrum of Omega*V and pair them up.
    Eigen::EigenSolver<Eigen::Matrix4d> solver(omega * v.matrix(), false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigen decomposition of Omega*V failed");
    }
    std::array<double, 4> mods;
    for (int i = 0; i < 4; ++i) mods[static_cast<size_t>(i)] = std::abs(solver.eigenvalues()(i));
    std::sort(mods.begin(), mods.end());
    return {(mods[0] + mods[1]) / 2.0, (mods[2] + mods[3]) / 2.0};
}

CovarianceMatrix partial_transpose_b(const CovarianceMatrix& v) {
    Eigen::Matrix4d flipped = v.matrix();
    for (int i = 0; i < 4; ++i) {
        if (i != 3) {
            flipped(i, 3) = -flipped(i, 3);
            flipped(3, i) = -flipped(3, i);
        }
    }
    return CovarianceMatrix(flipped);
}

double min_ptranspose_symplectic_eigenvalue(const CovarianceMatrix& v) {
    return std::sqrt(invariant_roots(v, -1.0, v.determinant()).first);
}

double min_ptranspose_symplectic_eigenvalue(const CovarianceMatrix& v, double det_v) {
    return std::sqrt(invariant_roots(v, -1.0, det_v).first);
}

double min_symplectic_eigenvalue(const CovarianceMatrix& v) {
    return std::sqrt(invariant_roots(v, +1.0, v.determinant()).first);
}

double physicality_tolerance(const CovarianceMatrix& v) {
    const double scale = std::max(1.0, v.matrix().cwiseAbs().maxCoeff());
    return std::max(1e-8, 64.0 * std::numeric_limits<double>::epsilon() * scale * scale);
}

double log_negativity(const CovarianceMatrix& v) {
    if (min_symplectic_eigenvalue(v) < 0.5 - physicality_tolerance(v)) {
        throw std::domain_error("covariance matrix is not a physical state");
    }
    const double nu = min_ptranspose_symplectic_eigenvalue(v);
    return std::max(0.0, -std::log2(2.0 * nu));
}

double width_meters(const CovarianceMatrix& v, Mode mode, double mass_kg, double omega) {
    if (!(mass_kg > 0.0) || !(omega > 0.0)) {
        throw std::invalid_argument("mass and omega must be positive");
    }
    const double vxx = mode == Mode::A ? v(0, 0) : v(2, 2);
    if (vxx < 0.0) {
        throw std::domain_error("negative position variance");
    }
    return std::sqrt(constants().hbar / (mass_kg * omega)) * std::sqrt(vxx);
}

}  // namespace gravent::cvcore
