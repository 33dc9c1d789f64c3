#pragma once

#include <vector>

#include "gmdetect/model.hpp"

namespace gmdetect::kalman {

using linalg::Matrix;
using linalg::Vector;

struct KalmanState {
    Vector xhat;  // predicted state
    Matrix P;     // prediction error covariance, in [0, Q(inf)]
};

struct FilterStep {
    KalmanState state;  // post-update
    Matrix gain;        // G(P_n), q x d
    Matrix theta;       // e^{-IA}(I - G C), q x q
    Matrix delta;       // C P_n C^T + I_d (pre-update innovation covariance)
    Vector innovation;  // Y_n - C xhat_n
    double logdet_delta = 0.0;
    double innovation_quad = 0.0;  // innov^T Delta^-1 innov
    double y_sq = 0.0;             // |Y_n|^2
};

struct LlrStep {
    double holding_time = 0.0;
    double logdet_delta = 0.0;
    double innovation_quad = 0.0;
    double y_sq = 0.0;
};

struct LlrResult {
    double total = 0.0;  // normalized LLR L_N
    std::vector<LlrStep> per_step;
};

// State transition over a holding time: phi = e^{-IA} and the excitation
// covariance Q(I) = Qinf - phi Qinf phi^T, with its Cholesky factor.
struct Transition {
    Matrix phi;
    Matrix Q;
    Matrix chol_l;
};

Transition transition(const GaussMarkovModel& model, double I);

// Memoizes the last holding time seen; regular sampling then costs one
// matrix exponential total.
class TransitionCache {
  public:
    explicit TransitionCache(const GaussMarkovModel& model) : model_(&model) {}
    const Transition& at(double I);

  private:
    const GaussMarkovModel* model_;
    Transition cached_;
    double last_i_ = -1.0;
    bool have_ = false;
};

// Kalman gain G(P) = P C^T (C P C^T + I)^-1
Matrix gain(const GaussMarkovModel& model, const Matrix& P);

// Covariance update F~_I(P) = e^{-IA}(I - G(P)C) P e^{-IA^T} + Q(I),
// symmetrized and clipped; maps [0, Q(inf)] into itself.
Matrix cov_update(const GaussMarkovModel& model, const Matrix& P, double I);

// One full filter step; innovation statistics refer to the pre-update state.
FilterStep full_update(const GaussMarkovModel& model, const KalmanState& state,
                       double I, const Vector& y);

KalmanState initial_state(const GaussMarkovModel& model);  // (0, Q(inf))

// Normalized LLR under the H0-Noise orientation:
//   L_N = (1/2N) [ sum logdet Delta_n + sum innov^T Delta^-1 innov - sum |Y|^2 ]
// running the filter from (0, Q(inf)). Compensated summation throughout.
LlrResult llr(const GaussMarkovModel& model, const SampledPath& path);

// CSV trace with columns n, I_n, logdet_delta, innovation_quad, y_sq.
void write_trace(const LlrResult& result, const std::string& path);

// Products Theta_{n,0} of Kalman transition matrices along the covariance
// chain started at P0, for n = 1..N. Theta_{0,0} = I by convention.
std::vector<Matrix> transition_product(const GaussMarkovModel& model,
                                       const Matrix& P0,
                                       const std::vector<double>& holding_times);

// Max over n of || (Z~_n^p - Z~_n^q) - Theta_{n,0}^p (p - q) (Theta_{n,0}^q)^T ||_max
// along a shared holding-time sequence. Exact identity: stays at rounding level.
double lipschitz_identity_check(const GaussMarkovModel& model, const Matrix& p,
                                const Matrix& q,
                                const std::vector<double>& holding_times);

}  // namespace gmdetect::kalman
