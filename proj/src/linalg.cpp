#include "gmdetect/linalg.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>

namespace gmdetect::linalg {

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

Matrix clip_psd(const Matrix& m, double floor, double tol)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
    Vector ev = es.eigenvalues();
    bool dirty = false;
    for (int i = 0; i < ev.size(); ++i) {
        if (ev(i) < floor) {
            if (ev(i) < floor - tol * (1.0 + std::abs(floor))) dirty = true;
            ev(i) = floor;
            dirty = true;
        }
    }
    if (!dirty) return symmetrize(m);
    return symmetrize(es.eigenvectors() * ev.asDiagonal() *
                      es.eigenvectors().transpose());
}

double spectral_radius(const Matrix& m)
{
    return m.eigenvalues().cwiseAbs().maxCoeff();
}

double min_eig_sym(const Matrix& m)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
    return es.eigenvalues().minCoeff();
}

Matrix psd_factor(const Matrix& m)
{
    if (m.rows() == 1)
        return Matrix::Constant(1, 1, std::sqrt(std::max(0.0, m(0, 0))));
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
    Vector ev = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
}

bool is_positive_stable(const Matrix& a)
{
    if (a.rows() != a.cols()) throw DimensionError("is_positive_stable: matrix must be square");
    return a.eigenvalues().real().minCoeff() > 1e-9;
}

Matrix expm(const Matrix& m, double t)
{
    if (m.rows() != m.cols()) throw DimensionError("expm: matrix must be square");
    if (!std::isfinite(t)) throw DimensionError("expm: t must be finite");
    if (m.rows() == 1) return Matrix::Constant(1, 1, std::exp(t * m(0, 0)));
    return (t * m).exp();  // scaling-and-squaring with Pade approximation
}

Matrix gramian(const Matrix& a, const Matrix& b, double x)
{
    if (a.rows() != a.cols()) throw DimensionError("gramian: A must be square");
    if (b.rows() != a.rows()) throw DimensionError("gramian: B row count must match A");
    if (std::isnan(x) || x < 0.0) throw DimensionError("gramian: x must be >= 0");
    if (std::isinf(x)) return lyapunov_qinf(a, b);

    const int q = static_cast<int>(a.rows());
    if (x == 0.0) return Matrix::Zero(q, q);

    // Van Loan block: exp([ -A  BB^T; 0  A^T ] x) = [ F11  F12; 0  F22 ]
    // with F12 = Q(x) F22, F22 = e^{A^T x}.
    Matrix block = Matrix::Zero(2 * q, 2 * q);
    block.topLeftCorner(q, q) = -a;
    block.topRightCorner(q, q) = b * b.transpose();
    block.bottomRightCorner(q, q) = a.transpose();
    const Matrix e = expm(block, x);
    const Matrix f12 = e.topRightCorner(q, q);
    const Matrix f22 = e.bottomRightCorner(q, q);
    return clip_psd(f12 * f22.inverse());
}

Matrix lyapunov_qinf(const Matrix& a, const Matrix& b)
{
    if (a.rows() != a.cols()) throw DimensionError("lyapunov_qinf: A must be square");
    if (b.rows() != a.rows()) throw DimensionError("lyapunov_qinf: B row count must match A");
    if (!is_positive_stable(a)) throw StabilityError("lyapunov_qinf: A is not positive stable");

    const int q = static_cast<int>(a.rows());
    const Matrix rhs = b * b.transpose();
    // vec(A Q + Q A^T) = (I (x) A + A (x) I) vec(Q)
    const Matrix eye = Matrix::Identity(q, q);
    Matrix k = Eigen::kroneckerProduct(eye, a) + Eigen::kroneckerProduct(a, eye);
    Eigen::Map<const Vector> rhs_vec(rhs.data(), q * q);
    Vector sol = k.partialPivLu().solve(rhs_vec);
    Eigen::Map<const Matrix> qm(sol.data(), q, q);
    return clip_psd(qm);
}

Matrix stein_solve(const Matrix& phi, const Matrix& q)
{
    const int n = static_cast<int>(phi.rows());
    if (phi.cols() != n || q.rows() != n || q.cols() != n)
        throw DimensionError("stein_solve: inconsistent dimensions");
    Matrix k = Matrix::Identity(n * n, n * n) -
               Eigen::kroneckerProduct(phi, phi);
    Eigen::Map<const Vector> q_vec(q.data(), n * n);
    Vector sol = k.partialPivLu().solve(q_vec);
    Eigen::Map<const Matrix> x(sol.data(), n, n);
    return symmetrize(x);
}

Matrix dare_solve(const Matrix& phi, const Matrix& c, const Matrix& q,
                  double tol, int max_iter)
{
    const int n = static_cast<int>(phi.rows());
    if (phi.cols() != n || q.rows() != n || q.cols() != n || c.cols() != n)
        throw DimensionError("dare_solve: inconsistent dimensions");
    if (tol <= 0.0) throw DimensionError("dare_solve: tol must be > 0");

    const int d = static_cast<int>(c.rows());
    const Matrix eye_d = Matrix::Identity(d, d);

    // Start at Q(inf), the fixed point of the Lyapunov part.
    Matrix p = clip_psd(stein_solve(phi, q));
    double diff = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iter; ++it) {
        const Matrix delta = c * p * c.transpose() + eye_d;
        const Matrix gain = delta.llt().solve(c * p).transpose();  // P C^T Delta^-1
        Matrix next = phi * (p - gain * c * p) * phi.transpose() + q;
        next = clip_psd(next);
        diff = (next - p).cwiseAbs().maxCoeff();
        p = next;
        if (diff <= tol) return p;
    }
    throw ConvergenceError("dare_solve: no convergence within max_iter", diff);
}

Matrix sigma_solve(const Matrix& phi, const Matrix& g, const Matrix& c,
                   double tol)
{
    const int n = static_cast<int>(phi.rows());
    if (phi.cols() != n || g.rows() != n || c.cols() != n)
        throw DimensionError("sigma_solve: inconsistent dimensions");
    if (tol <= 0.0) throw DimensionError("sigma_solve: tol must be > 0");

    const Matrix theta = phi * (Matrix::Identity(n, n) - g * c);
    if (spectral_radius(theta) >= 1.0)
        throw StabilityError("sigma_solve: spectral radius of Phi(I - GC) is >= 1");
    const Matrix rhs = phi * g * g.transpose() * phi.transpose();
    Matrix sigma = stein_solve(theta, rhs);
    // defining-equation residual check
    const double res =
        (sigma - theta * sigma * theta.transpose() - rhs).cwiseAbs().maxCoeff();
    if (res > 10.0 * tol * (1.0 + rhs.cwiseAbs().maxCoeff()))
        throw ConvergenceError("sigma_solve: Stein residual above tolerance", res);
    return clip_psd(sigma);
}

}  // namespace gmdetect::linalg
