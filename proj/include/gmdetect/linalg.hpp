#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace gmdetect::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class DimensionError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
class StabilityError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual(residual) {}
    double residual;
};

// (M + M^T)/2
Matrix symmetrize(const Matrix& m);

// Symmetrize and clip eigenvalues below `floor` (tiny negatives from rounding).
Matrix clip_psd(const Matrix& m, double floor = 0.0, double tol = 1e-12);

double spectral_radius(const Matrix& m);

// min eigenvalue of a symmetric matrix
double min_eig_sym(const Matrix& m);

// Factor L with L L^T = clip_psd(m); robust to singular covariances
// (eigendecomposition-based, not triangular).
Matrix psd_factor(const Matrix& m);

// all eigenvalues of A have real part > 1e-9
bool is_positive_stable(const Matrix& a);

// e^{tM} by scaling-and-squaring with Pade approximation
Matrix expm(const Matrix& m, double t = 1.0);

// Controllability Gramian Q(x) = \int_0^x e^{-uA} B B^T e^{-uA^T} du
// via the 2q x 2q augmented block exponential (Van Loan).
// x may be +infinity, in which case the Lyapunov solution is returned.
Matrix gramian(const Matrix& a, const Matrix& b, double x);

// Unique Q with Q A^T + A Q = B B^T, by vectorized (Kronecker) linear solve.
// Requires A positive stable.
Matrix lyapunov_qinf(const Matrix& a, const Matrix& b);

// Unique X with X - Phi X Phi^T = Q (discrete Lyapunov / Stein equation).
Matrix stein_solve(const Matrix& phi, const Matrix& q);

// Steady-state prediction covariance of the unit-spacing covariance update:
//   P = Phi (P - P C^T (C P C^T + I)^-1 C P) Phi^T + Q
// by fixed-point iteration started at the Stein solution of X - Phi X Phi^T = Q.
Matrix dare_solve(const Matrix& phi, const Matrix& c, const Matrix& q,
                  double tol = 1e-12, int max_iter = 100000);

// Unique solution of Sigma - Theta Sigma Theta^T = Phi G G^T Phi^T with
// Theta = Phi (I - G C). Throws StabilityError when rho(Theta) >= 1.
Matrix sigma_solve(const Matrix& phi, const Matrix& g, const Matrix& c,
                   double tol = 1e-12);

}  // namespace gmdetect::linalg
