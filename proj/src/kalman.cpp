#include "gmdetect/kalman.hpp"

#include <cmath>
#include <fstream>

namespace gmdetect::kalman {

namespace {

// Kahan compensated accumulator; LLR sums run up to 1e7 terms.
struct Kahan {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x)
    {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

Transition transition(const GaussMarkovModel& model, double I)
{
    if (!(I >= 0.0) || !std::isfinite(I))
        throw std::invalid_argument("transition: holding time must be finite and >= 0");
    Transition tr;
    if (model.q() == 1) {
        const double phi = std::exp(-I * model.A(0, 0));
        tr.phi = linalg::Matrix::Constant(1, 1, phi);
        const double q = std::max(0.0, model.Qinf(0, 0) * (1.0 - phi * phi));
        tr.Q = linalg::Matrix::Constant(1, 1, q);
        tr.chol_l = linalg::Matrix::Constant(1, 1, std::sqrt(q));
        return tr;
    }
    tr.phi = linalg::expm(model.A, -I);
    // Q(I) = Qinf - e^{-IA} Qinf e^{-IA^T}, same as the Gramian integral
    tr.Q = linalg::clip_psd(model.Qinf - tr.phi * model.Qinf * tr.phi.transpose());
    tr.chol_l = linalg::psd_factor(tr.Q);
    return tr;
}

const Transition& TransitionCache::at(double I)
{
    if (!have_ || I != last_i_) {
        cached_ = transition(*model_, I);
        last_i_ = I;
        have_ = true;
    }
    return cached_;
}

Matrix gain(const GaussMarkovModel& model, const Matrix& P)
{
    const int d = model.d();
    const Matrix delta =
        model.C * P * model.C.transpose() + Matrix::Identity(d, d);
    // G (C P C^T + I) = P C^T, solved by Cholesky (Delta >= I)
    return delta.llt().solve(model.C * P).transpose();
}

Matrix cov_update(const GaussMarkovModel& model, const Matrix& P, double I)
{
    const Transition tr = transition(model, I);
    const Matrix g = gain(model, P);
    const Matrix inner = (Matrix::Identity(model.q(), model.q()) - g * model.C) * P;
    return linalg::clip_psd(tr.phi * inner * tr.phi.transpose() + tr.Q);
}

KalmanState initial_state(const GaussMarkovModel& model)
{
    return KalmanState{Vector::Zero(model.q()), model.Qinf};
}

FilterStep full_update(const GaussMarkovModel& model, const KalmanState& state,
                       double I, const Vector& y)
{
    if (y.size() != model.d())
        throw linalg::DimensionError("full_update: observation dimension mismatch");
    const int q = model.q();
    const int d = model.d();

    FilterStep step;
    step.delta = model.C * state.P * model.C.transpose() + Matrix::Identity(d, d);
    Eigen::LLT<Matrix> llt(step.delta);
    step.gain = llt.solve(model.C * state.P).transpose();
    step.innovation = y - model.C * state.xhat;

    step.logdet_delta =
        2.0 * Matrix(llt.matrixL()).diagonal().array().log().sum();
    step.innovation_quad = step.innovation.dot(llt.solve(step.innovation));
    step.y_sq = y.squaredNorm();

    const Transition tr = transition(model, I);
    step.theta = tr.phi * (Matrix::Identity(q, q) - step.gain * model.C);
    step.state.xhat = step.theta * state.xhat + tr.phi * step.gain * y;
    step.state.P = linalg::clip_psd(
        tr.phi * (Matrix::Identity(q, q) - step.gain * model.C) * state.P *
            tr.phi.transpose() +
        tr.Q);
    return step;
}

LlrResult llr(const GaussMarkovModel& model, const SampledPath& path)
{
    if (path.size() == 0) throw std::invalid_argument("llr: empty path");
    const int q = model.q();
    const int d = model.d();
    const std::size_t n = path.size();

    LlrResult result;
    result.per_step.reserve(n);
    Kahan logdet_sum, quad_sum, ysq_sum;

    // I_k is the gap before observation k, so each step predicts across I_k
    // first, scores Y_k against the predicted state, then measurement-updates.
    if (q == 1 && d == 1) {
        // allocation-free scalar fast path; (xhat, P) are posterior quantities
        const double a = model.A(0, 0);
        const double c = model.C(0, 0);
        const double qinf = model.Qinf(0, 0);
        double xhat = 0.0, P = qinf;
        double last_i = -1.0, phi = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double I = path.holding_times[k];
            if (I != last_i) {
                phi = std::exp(-a * I);
                last_i = I;
            }
            const double xpred = phi * xhat;
            const double ppred = std::min(
                qinf, std::max(0.0, phi * P * phi + qinf * (1.0 - phi * phi)));
            const double y = path.observations[k](0);
            const double delta = c * ppred * c + 1.0;
            const double innov = y - c * xpred;
            const double ld = std::log(delta);
            const double quad = innov * innov / delta;
            logdet_sum.add(ld);
            quad_sum.add(quad);
            ysq_sum.add(y * y);
            result.per_step.push_back({I, ld, quad, y * y});
            const double g = ppred * c / delta;
            xhat = xpred + g * innov;
            P = (1.0 - g * c) * ppred;
        }
    } else {
        Vector xhat = Vector::Zero(q);
        Matrix P = model.Qinf;
        TransitionCache cache(model);
        for (std::size_t k = 0; k < n; ++k) {
            const double I = path.holding_times[k];
            const auto& tr = cache.at(I);
            const Vector xpred = tr.phi * xhat;
            const Matrix ppred =
                linalg::clip_psd(tr.phi * P * tr.phi.transpose() + tr.Q);

            const Vector& y = path.observations[k];
            const Matrix delta =
                model.C * ppred * model.C.transpose() + Matrix::Identity(d, d);
            Eigen::LLT<Matrix> llt(delta);
            const Vector innov = y - model.C * xpred;
            const double ld =
                2.0 * Matrix(llt.matrixL()).diagonal().array().log().sum();
            const double quad = innov.dot(llt.solve(innov));
            const double ysq = y.squaredNorm();
            logdet_sum.add(ld);
            quad_sum.add(quad);
            ysq_sum.add(ysq);
            result.per_step.push_back({I, ld, quad, ysq});

            const Matrix g = llt.solve(model.C * ppred).transpose();
            xhat = xpred + g * innov;
            P = linalg::clip_psd(
                (Matrix::Identity(q, q) - g * model.C) * ppred);
        }
    }

    result.total = (logdet_sum.sum + quad_sum.sum - ysq_sum.sum) /
                   (2.0 * static_cast<double>(n));
    return result;
}

void write_trace(const LlrResult& result, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_trace: cannot open " + path);
    out << "n,I_n,logdet_delta,innovation_quad,y_sq\n";
    out.precision(17);
    for (std::size_t n = 0; n < result.per_step.size(); ++n) {
        const auto& s = result.per_step[n];
        out << (n + 1) << ',' << s.holding_time << ',' << s.logdet_delta << ','
            << s.innovation_quad << ',' << s.y_sq << '\n';
    }
}

std::vector<Matrix> transition_product(const GaussMarkovModel& model,
                                       const Matrix& P0,
                                       const std::vector<double>& holding_times)
{
    const int q = model.q();
    std::vector<Matrix> products;
    products.reserve(holding_times.size());
    Matrix prod = Matrix::Identity(q, q);
    Matrix P = P0;
    TransitionCache cache(model);
    for (double I : holding_times) {
        const Matrix g = gain(model, P);
        const auto& tr = cache.at(I);
        const Matrix theta = tr.phi * (Matrix::Identity(q, q) - g * model.C);
        prod = theta * prod;  // Theta_{n,0} = Theta_n ... Theta_1
        products.push_back(prod);
        P = linalg::clip_psd(tr.phi * (Matrix::Identity(q, q) - g * model.C) * P *
                                 tr.phi.transpose() +
                             tr.Q);
    }
    return products;
}

double lipschitz_identity_check(const GaussMarkovModel& model, const Matrix& p,
                                const Matrix& q,
                                const std::vector<double>& holding_times)
{
    const auto theta_p = transition_product(model, p, holding_times);
    const auto theta_q = transition_product(model, q, holding_times);

    Matrix zp = p, zq = q;
    double max_residual = 0.0;
    TransitionCache cache(model);
    for (std::size_t n = 0; n < holding_times.size(); ++n) {
        zp = cov_update(model, zp, holding_times[n]);
        zq = cov_update(model, zq, holding_times[n]);
        const Matrix lhs = zp - zq;
        const Matrix rhs = theta_p[n] * (p - q) * theta_q[n].transpose();
        max_residual = std::max(max_residual, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    return max_residual;
}

}  // namespace gmdetect::kalman
