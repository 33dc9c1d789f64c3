#include "gmdetect/exponents.hpp"

#include <atomic>
#include <cmath>
#include <future>
#include <numeric>

#include "gmdetect/kalman.hpp"

namespace gmdetect::exponents {

namespace {

constexpr int kBatches = 100;

std::int64_t effective_burn_in(const McOptions& opts)
{
    if (opts.burn_in >= 0) return opts.burn_in;
    return std::max<std::int64_t>(1000, opts.chain_length / 100);
}

struct BatchAccumulator {
    explicit BatchAccumulator(std::int64_t n_samples)
        : batch_size(std::max<std::int64_t>(1, n_samples / kBatches))
    {
        batch_means.reserve(kBatches);
    }

    void add(double x)
    {
        current += x;
        if (++in_batch == batch_size) {
            batch_means.push_back(current / static_cast<double>(batch_size));
            current = 0.0;
            in_batch = 0;
        }
    }

    std::int64_t batch_size;
    std::int64_t in_batch = 0;
    double current = 0.0;
    std::vector<double> batch_means;
};

// pooled mean and batch-means standard error
std::pair<double, double> pool(const std::vector<double>& batch_means)
{
    const auto nb = static_cast<double>(batch_means.size());
    const double mean =
        std::accumulate(batch_means.begin(), batch_means.end(), 0.0) / nb;
    double var = 0.0;
    for (double b : batch_means) var += (b - mean) * (b - mean);
    var /= (nb - 1.0);
    return {mean, std::sqrt(var / nb)};
}

// One ergodic chain of the per-step integrand; `signal_only` drives just the
// covariance chain (no observations).
std::vector<double> run_chain(const GaussMarkovModel& model,
                              const RenewalSpec& sampling, bool signal_only,
                              std::int64_t chain_length, std::int64_t burn_in,
                              std::uint64_t seed, std::uint64_t stream)
{
    RngStream rng(seed, stream);
    BatchAccumulator acc(chain_length - burn_in);

    const int q = model.q();
    const int d = model.d();

    if (q == 1 && d == 1) {
        // scalar fast path
        const double a = model.A(0, 0);
        const double c = model.C(0, 0);
        const double qinf = model.Qinf(0, 0);
        double xhat = 0.0, P = qinf;
        double last_i = -1.0, phi = 1.0;
        for (std::int64_t n = 0; n < chain_length; ++n) {
            if (n >= burn_in) {
                const double delta = c * P * c + 1.0;
                if (signal_only)
                    acc.add(std::log(delta));
                else
                    acc.add(0.5 * (std::log(delta) +
                                   c * (xhat * xhat - P) * c / delta));
            }
            const double I = sampling.draw(rng);
            if (I != last_i) {
                phi = std::exp(-a * I);
                last_i = I;
            }
            const double delta = c * P * c + 1.0;
            const double g = P * c / delta;
            const double excite = std::max(0.0, qinf * (1.0 - phi * phi));
            if (!signal_only) {
                const double y = rng.normal();
                xhat = phi * ((1.0 - g * c) * xhat + g * y);
            }
            P = std::min(qinf,
                         std::max(0.0, phi * (1.0 - g * c) * P * phi + excite));
        }
        return acc.batch_means;
    }

    kalman::KalmanState state = kalman::initial_state(model);
    kalman::TransitionCache cache(model);
    const linalg::Matrix eye_d = linalg::Matrix::Identity(d, d);
    const linalg::Matrix eye_q = linalg::Matrix::Identity(q, q);
    linalg::Vector y(d);
    for (std::int64_t n = 0; n < chain_length; ++n) {
        const linalg::Matrix delta =
            model.C * state.P * model.C.transpose() + eye_d;
        Eigen::LLT<linalg::Matrix> llt(delta);
        if (n >= burn_in) {
            const double logdet =
                2.0 * linalg::Matrix(llt.matrixL()).diagonal().array().log().sum();
            if (signal_only) {
                acc.add(logdet);
            } else {
                const linalg::Vector cx = model.C * state.xhat;
                const double quad = cx.dot(llt.solve(cx));
                const double tr_term =
                    (llt.solve(model.C * state.P * model.C.transpose())).trace();
                acc.add(0.5 * (logdet + quad - tr_term));
            }
        }
        const double I = sampling.draw(rng);
        const auto& tr = cache.at(I);
        const linalg::Matrix g = llt.solve(model.C * state.P).transpose();
        if (!signal_only) {
            for (int i = 0; i < d; ++i) y(i) = rng.normal();
            state.xhat = tr.phi * ((eye_q - g * model.C) * state.xhat + g * y);
        }
        state.P = linalg::clip_psd(
            tr.phi * (eye_q - g * model.C) * state.P * tr.phi.transpose() + tr.Q);
    }
    return acc.batch_means;
}

ExponentEstimate mc_estimate(const GaussMarkovModel& model,
                             const RenewalSpec& sampling, bool signal_only,
                             const McOptions& opts)
{
    if (opts.chain_length <= 0)
        throw std::invalid_argument("mc_exponent: chain_length must be > 0");
    const std::int64_t burn_in = effective_burn_in(opts);
    if (opts.chain_length <= burn_in)
        throw std::invalid_argument("mc_exponent: chain_length must exceed burn-in");
    if (opts.replicates < 1)
        throw std::invalid_argument("mc_exponent: replicates must be >= 1");

    // replicate results merged in chain-index order, so the pooled estimate
    // does not depend on scheduling
    std::vector<std::vector<double>> per_replicate(
        static_cast<std::size_t>(opts.replicates));
    if (opts.threads > 1 && opts.replicates > 1) {
        std::vector<std::future<void>> jobs;
        std::atomic<int> next{0};
        const int workers = std::min(opts.threads, opts.replicates);
        for (int w = 0; w < workers; ++w) {
            jobs.push_back(std::async(std::launch::async, [&] {
                for (int r = next.fetch_add(1); r < opts.replicates;
                     r = next.fetch_add(1)) {
                    per_replicate[static_cast<std::size_t>(r)] = run_chain(
                        model, sampling, signal_only, opts.chain_length, burn_in,
                        opts.seed, static_cast<std::uint64_t>(r));
                }
            }));
        }
        for (auto& job : jobs) job.get();
    } else {
        for (int r = 0; r < opts.replicates; ++r)
            per_replicate[static_cast<std::size_t>(r)] = run_chain(
                model, sampling, signal_only, opts.chain_length, burn_in,
                opts.seed, static_cast<std::uint64_t>(r));
    }
    std::vector<double> batch_means;
    for (const auto& batches : per_replicate)
        batch_means.insert(batch_means.end(), batches.begin(), batches.end());
    auto [mean, se] = pool(batch_means);

    ExponentEstimate est;
    est.chain_length = opts.chain_length * opts.replicates;
    est.burn_in = burn_in;
    est.seed = opts.seed;
    if (signal_only) {
        const double tr_term =
            (model.C * model.Qinf * model.C.transpose()).trace();
        est.value = 0.5 * (tr_term - mean);
        est.stderr_ = 0.5 * se;
        est.method = Method::MonteCarloSignal;
    } else {
        est.value = mean;
        est.stderr_ = se;
        est.method = Method::MonteCarloNoise;
    }
    return est;
}

}  // namespace

const char* method_name(Method m)
{
    switch (m) {
        case Method::MonteCarloNoise: return "mc_noise";
        case Method::MonteCarloSignal: return "mc_signal";
        case Method::RegularClosedForm: return "regular_closed_form";
        case Method::ScalarClosedForm: return "scalar_closed_form";
        case Method::LargeSLimit: return "large_s_limit";
    }
    return "unknown";
}

ExponentEstimate mc_exponent_h0_noise(const GaussMarkovModel& model,
                                      const RenewalSpec& sampling,
                                      const McOptions& opts)
{
    return mc_estimate(model, sampling, /*signal_only=*/false, opts);
}

ExponentEstimate mc_exponent_h0_signal(const GaussMarkovModel& model,
                                       const RenewalSpec& sampling,
                                       const McOptions& opts)
{
    return mc_estimate(model, sampling, /*signal_only=*/true, opts);
}

std::pair<double, double> regular_exponents(const GaussMarkovModel& model)
{
    const int d = model.d();
    const linalg::Matrix eye_d = linalg::Matrix::Identity(d, d);

    const linalg::Matrix phi = linalg::expm(model.A, -1.0);
    const linalg::Matrix q1 = linalg::gramian(model.A, model.B, 1.0);
    const linalg::Matrix pr = linalg::dare_solve(phi, model.C, q1);
    const linalg::Matrix g = kalman::gain(model, pr);
    const linalg::Matrix sigma = linalg::sigma_solve(phi, g, model.C);

    const linalg::Matrix delta = model.C * pr * model.C.transpose() + eye_d;
    Eigen::LLT<linalg::Matrix> llt(delta);
    const double logdet =
        2.0 * linalg::Matrix(llt.matrixL()).diagonal().array().log().sum();
    const double tr_p =
        llt.solve(model.C * pr * model.C.transpose()).trace();
    const double tr_sigma =
        llt.solve(model.C * sigma * model.C.transpose()).trace();

    const double noise = 0.5 * (logdet - tr_p + tr_sigma);
    const double signal =
        0.5 * ((model.C * model.Qinf * model.C.transpose()).trace() - logdet);
    return {noise, signal};
}

double scalar_regular_pr(double a, double snr)
{
    const double phi2 = std::exp(-2.0 * a);
    const double u = (snr - 1.0) * (1.0 - phi2);
    return 0.5 * (u + std::sqrt(u * u + 4.0 * snr * (1.0 - phi2)));
}

std::pair<double, double> scalar_regular_exponents(double a, double snr)
{
    if (!(a > 0.0) || !(snr > 0.0))
        throw std::invalid_argument("scalar_regular_exponents: a, snr must be > 0");
    const double pr = scalar_regular_pr(a, snr);
    const double phi2 = std::exp(-2.0 * a);
    // xi_noise = (1/2)( log(1+P) + P/(1+P) ( Phi^2 P / ((1+P)^2 - Phi^2) - 1 ) ),
    // equivalently log det - trace + Sigma terms of the vector formula
    const double ratio = phi2 * pr / ((1.0 + pr) * (1.0 + pr) - phi2);
    const double noise =
        0.5 * (std::log1p(pr) + pr / (1.0 + pr) * (ratio - 1.0));
    const double signal = 0.5 * (snr - std::log1p(pr));
    return {noise, signal};
}

std::pair<double, double> large_s_limits(const GaussMarkovModel& model)
{
    const int d = model.d();
    const linalg::Matrix eye_d = linalg::Matrix::Identity(d, d);
    const linalg::Matrix s = model.C * model.Qinf * model.C.transpose() + eye_d;
    Eigen::LLT<linalg::Matrix> llt(s);
    const double logdet =
        2.0 * linalg::Matrix(llt.matrixL()).diagonal().array().log().sum();
    // D(N(0,I) || N(0,S)) and D(N(0,S) || N(0,I)) with S = C Qinf C^T + I
    const double noise_kl = 0.5 * (logdet + llt.solve(eye_d).trace() - d);
    const double signal_kl = 0.5 * (s.trace() - d - logdet);
    return {noise_kl, signal_kl};
}

std::vector<ExponentEstimate> monotonicity_scan(double snr,
                                                const std::vector<double>& a_grid,
                                                const RenewalSpec& sampling,
                                                std::int64_t chain_length,
                                                std::uint64_t seed)
{
    for (std::size_t i = 1; i < a_grid.size(); ++i)
        if (!(a_grid[i] > a_grid[i - 1]))
            throw std::invalid_argument(
                "monotonicity_scan: a_grid must be strictly increasing");

    std::vector<ExponentEstimate> out;
    out.reserve(a_grid.size());
    McOptions opts;
    opts.chain_length = chain_length;
    opts.seed = seed;  // common random numbers: same stream for every a
    for (double a : a_grid)
        out.push_back(mc_exponent_h0_signal(scalar_ou(a, snr), sampling, opts));
    return out;
}

}  // namespace gmdetect::exponents
