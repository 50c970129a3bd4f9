#pragma once

#include <Eigen/Dense>

#include <utility>

namespace gravent::cvcore {

// Two-mode Gaussian state algebra over the quadrature vector
// u = (X_A, P_A, X_B, P_B), with dimensionless quadratures
// X = sqrt(m*omega/hbar) x and P = p / sqrt(hbar*m*omega).
//
// Convention used everywhere in this library: vacuum variance 1/2.
// A physical two-mode covariance matrix has both symplectic eigenvalues
// >= 1/2; the partially transposed matrix dips below 1/2 exactly when the
// modes are entangled.

/// Thermal occupation plus optional single-mode squeezing of each mode.
/// s > 0 enlarges the position variance (anti-squeezing), s < 0 shrinks it.
struct InitialStateSpec {
    double nbar = 0.0;
    double s_a = 0.0;
    double s_b = 0.0;
};

/// 4x4 real symmetric second-moment matrix of (X_A, P_A, X_B, P_B).
///
/// Construction symmetrizes inputs whose asymmetry is below 1e-12 relative
/// to the largest entry and rejects anything worse.
class CovarianceMatrix {
  public:
    explicit CovarianceMatrix(const Eigen::Matrix4d& entries);

    const Eigen::Matrix4d& matrix() const { return entries_; }
    double operator()(int row, int col) const { return entries_(row, col); }

    Eigen::Matrix2d block_a() const { return entries_.topLeftCorner<2, 2>(); }
    Eigen::Matrix2d block_b() const { return entries_.bottomRightCorner<2, 2>(); }
    Eigen::Matrix2d block_cross() const { return entries_.topRightCorner<2, 2>(); }

    /// det V through a mode-split block factorization; well conditioned for
    /// spread-dominated states whose plain LU determinant cancels badly.
    double determinant() const;

  private:
    Eigen::Matrix4d entries_;
};

/// Full Gaussian state: quadrature expectations plus second moments.
struct QuadratureState {
    QuadratureState(const Eigen::Vector4d& mean_in, CovarianceMatrix cov_in);

    Eigen::Vector4d mean;
    CovarianceMatrix cov;
};

enum class Mode { A, B };

/// Covariance of an uncorrelated squeezed thermal pair:
/// diag(v e^{2sA}, v e^{-2sA}, v e^{2sB}, v e^{-2sB}) with v = (2 nbar + 1)/2.
CovarianceMatrix thermal_squeezed_covariance(const InitialStateSpec& spec);

/// Both symplectic eigenvalues, ascending, from the spectrum of i*Omega*V.
std::pair<double, double> symplectic_eigenvalues(const CovarianceMatrix& v);

/// Flip the sign of P_B: returns Lambda V Lambda with Lambda = diag(1,1,1,-1).
CovarianceMatrix partial_transpose_b(const CovarianceMatrix& v);

/// Minimum symplectic eigenvalue of the partial transpose, via the closed
/// form nu~ = sqrt((Sigma - sqrt(Sigma^2 - 4 det V)) / 2) with
/// Sigma = det I_A + det I_B - 2 det L. Throws std::domain_error when the
/// discriminant is negative beyond round-off tolerance.
double min_ptranspose_symplectic_eigenvalue(const CovarianceMatrix& v);

/// Same closed form with det V supplied by the caller. Undamped flows
/// conserve the determinant exactly, and the conserved value beats anything
/// recoverable from the spread-dominated entries of the evolved matrix.
double min_ptranspose_symplectic_eigenvalue(const CovarianceMatrix& v, double det_v);

/// Logarithmic negativity E = max{0, -log2(2 nu~_min)}. Rejects covariance
/// matrices that are unphysical beyond round-off tolerance.
double log_negativity(const CovarianceMatrix& v);

/// Physical position standard deviation of one mode, in meters:
/// sqrt(hbar/(m omega)) * sqrt(V_XX).
double width_meters(const CovarianceMatrix& v, Mode mode, double mass_kg, double omega);

/// Minimum symplectic eigenvalue of V itself (no transposition), closed form.
double min_symplectic_eigenvalue(const CovarianceMatrix& v);

/// Round-off allowance for physicality checks. Grows with the square of the
/// entry scale, which bounds the cancellation error of the block
/// determinants entering the symplectic invariants.
double physicality_tolerance(const CovarianceMatrix& v);

}  // namespace gravent::cvcore
