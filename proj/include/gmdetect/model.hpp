#pragma once

#include <vector>

#include "gmdetect/linalg.hpp"
#include "gmdetect/rng.hpp"

namespace gmdetect {

using linalg::Matrix;
using linalg::Vector;

class ControllabilityError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Validated signal model dX = -A X dt + B dW observed as Y = C X + V.
// A is positive stable, (A, B) controllable; Qinf caches the stationary
// covariance solving Q A^T + A Q = B B^T. Immutable after validation.
struct GaussMarkovModel {
    Matrix A;     // q x q drift
    Matrix B;     // q x p diffusion
    Matrix C;     // d x q observation
    Matrix Qinf;  // q x q stationary covariance
    Matrix QinfCholL;  // lower Cholesky factor of Qinf

    int q() const { return static_cast<int>(A.rows()); }
    int p() const { return static_cast<int>(B.cols()); }
    int d() const { return static_cast<int>(C.rows()); }
};

enum class Hypothesis { H0, H1 };

struct SampledPath {
    std::vector<double> holding_times;
    std::vector<Vector> states;        // X_n, q-dimensional
    std::vector<Vector> observations;  // Y_n, d-dimensional
    Hypothesis hypothesis = Hypothesis::H0;

    std::size_t size() const { return holding_times.size(); }
};

// Checks dimensions, positive stability of A and controllability of (A, B);
// throws DimensionError / StabilityError / ControllabilityError naming the
// violated hypothesis.
GaussMarkovModel validate(const Matrix& a, const Matrix& b, const Matrix& c);

// 1-D Ornstein-Uhlenbeck model with A = [a], C = [1] and B chosen so that
// Q(inf) = b^2/(2a) = snr.
GaussMarkovModel scalar_ou(double a, double snr);

// SNR = tr(C Qinf C^T) / d
double snr_of(const GaussMarkovModel& model);

// Same (A, B) with C rescaled so that snr_of(result) == snr.
GaussMarkovModel with_snr(const GaussMarkovModel& model, double snr);

// Q(x) for this model, see linalg::gramian.
Matrix gramian_q(const GaussMarkovModel& model, double x);

// X_0 ~ N(0, Qinf); X_{n+1} = e^{-I_{n+1} A} X_n + U_{n+1},
// U_{n+1} ~ N(0, Q(I_{n+1})); Y_n = C X_n + V_n under H1, Y_n = V_n under H0.
SampledPath simulate_path(const GaussMarkovModel& model,
                          const std::vector<double>& holding_times,
                          Hypothesis hypothesis, RngStream& rng);

}  // namespace gmdetect
