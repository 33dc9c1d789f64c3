#include "gmdetect/model.hpp"

#include <cmath>
#include <sstream>

#include "gmdetect/kalman.hpp"

namespace gmdetect {

using linalg::DimensionError;
using linalg::StabilityError;

GaussMarkovModel validate(const Matrix& a, const Matrix& b, const Matrix& c)
{
    if (a.rows() != a.cols()) throw DimensionError("validate: A must be square");
    if (b.rows() != a.rows())
        throw DimensionError("validate: B must have as many rows as A");
    if (c.cols() != a.rows())
        throw DimensionError("validate: C must have as many columns as A has rows");
    if (!a.allFinite() || !b.allFinite() || !c.allFinite())
        throw DimensionError("validate: matrices must be finite");

    if (!linalg::is_positive_stable(a))
        throw StabilityError("validate: A is not positive stable "
                             "(some eigenvalue has real part <= 0)");
    // (A, B) controllable iff Q(1) is nonsingular
    const Matrix q1 = linalg::gramian(a, b, 1.0);
    if (linalg::min_eig_sym(q1) <= 1e-10)
        throw ControllabilityError("validate: (A, B) is not controllable "
                                   "(Q(1) is singular)");

    GaussMarkovModel model;
    model.A = a;
    model.B = b;
    model.C = c;
    model.Qinf = linalg::lyapunov_qinf(a, b);
    model.QinfCholL = linalg::psd_factor(model.Qinf);
    return model;
}

GaussMarkovModel scalar_ou(double a, double snr)
{
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("scalar_ou: a must be > 0");
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw std::invalid_argument("scalar_ou: snr must be > 0");
    const double b = std::sqrt(2.0 * a * snr);  // Q(inf) = b^2/(2a) = snr
    return validate(Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b),
                    Matrix::Constant(1, 1, 1.0));
}

double snr_of(const GaussMarkovModel& model)
{
    return (model.C * model.Qinf * model.C.transpose()).trace() /
           static_cast<double>(model.d());
}

GaussMarkovModel with_snr(const GaussMarkovModel& model, double snr)
{
    if (!(snr > 0.0)) throw std::invalid_argument("with_snr: snr must be > 0");
    const double current = snr_of(model);
    if (!(current > 0.0))
        throw std::invalid_argument("with_snr: model has C Qinf C^T = 0");
    return validate(model.A, model.B, std::sqrt(snr / current) * model.C);
}

Matrix gramian_q(const GaussMarkovModel& model, double x)
{
    return linalg::gramian(model.A, model.B, x);
}

SampledPath simulate_path(const GaussMarkovModel& model,
                          const std::vector<double>& holding_times,
                          Hypothesis hypothesis, RngStream& rng)
{
    for (double I : holding_times)
        if (!(I >= 0.0) || !std::isfinite(I))
            throw std::invalid_argument(
                "simulate_path: holding times must be finite and >= 0");

    const int q = model.q();
    const int d = model.d();
    const std::size_t n = holding_times.size();

    SampledPath path;
    path.holding_times = holding_times;
    path.hypothesis = hypothesis;
    path.states.reserve(n);
    path.observations.reserve(n);

    auto draw_gauss = [&rng](const Matrix& chol_l) {
        Vector z(chol_l.rows());
        for (int i = 0; i < z.size(); ++i) z(i) = rng.normal();
        return Vector(chol_l * z);
    };

    // X_0 stationary
    Vector x = draw_gauss(model.QinfCholL);
    kalman::TransitionCache cache(model);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& tr = cache.at(holding_times[k]);
        x = tr.phi * x + draw_gauss(tr.chol_l);
        Vector v(d);
        for (int i = 0; i < d; ++i) v(i) = rng.normal();
        path.states.push_back(x);
        if (hypothesis == Hypothesis::H1)
            path.observations.push_back(model.C * x + v);
        else
            path.observations.push_back(v);
    }
    return path;
}

}  // namespace gmdetect
