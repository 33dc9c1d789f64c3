// gmdetect: error exponents for Neyman-Pearson detection of a sampled
// Gauss-Markov process. Subcommands: exponent, sweep, detect, dare, limits.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "gmdetect/config.hpp"
#include "gmdetect/detection.hpp"
#include "gmdetect/exponents.hpp"
#include "gmdetect/kalman.hpp"

namespace {

using namespace gmdetect;

constexpr int kExitConfig = 2;
constexpr int kExitModel = 3;
constexpr int kExitSolver = 4;

struct CsvRow {
    std::string param_name;
    double param_value = 0.0;
    std::string method;
    double exponent = 0.0;
    double stderr_ = 0.0;
    std::int64_t chain_length = 0;
    std::uint64_t seed = 0;
};

class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::invalid_argument("cannot open output file: " + path);
        }
        stream() << "param_name,param_value,method,exponent,stderr,chain_length,seed\n";
        stream().precision(12);
    }

    void row(const CsvRow& r)
    {
        stream() << r.param_name << ',' << r.param_value << ',' << r.method << ','
                 << r.exponent << ',' << r.stderr_ << ',' << r.chain_length << ','
                 << r.seed << '\n';
    }

  private:
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    std::ofstream file_;
};

void emit_estimate(CsvWriter& csv, const std::string& param_name,
                   double param_value, const exponents::ExponentEstimate& est)
{
    csv.row({param_name, param_value, exponents::method_name(est.method),
             est.value, est.stderr_, est.chain_length, est.seed});
    std::cerr << param_name << "=" << param_value << " "
              << exponents::method_name(est.method) << " " << est.value
              << " +/- " << est.stderr_ << " (nats/sample)\n";
}

exponents::McOptions mc_options(const config::RunConfig& cfg, int threads)
{
    exponents::McOptions opts;
    opts.chain_length = cfg.chain_length;
    opts.burn_in = cfg.burn_in;
    opts.seed = cfg.seed;
    opts.replicates = cfg.replicates;
    opts.threads = threads;
    return opts;
}

int run_exponent(const config::RunConfig& cfg, int threads)
{
    CsvWriter csv(cfg.output_path);
    const auto opts = mc_options(cfg, threads);
    const double snr = snr_of(cfg.model);
    emit_estimate(csv, "snr", snr,
                  exponents::mc_exponent_h0_noise(cfg.model, cfg.sampling, opts));
    emit_estimate(csv, "snr", snr,
                  exponents::mc_exponent_h0_signal(cfg.model, cfg.sampling, opts));
    return 0;
}

int run_sweep(const config::RunConfig& cfg, int threads)
{
    if (cfg.sweep_param.empty())
        throw std::invalid_argument("sweep task needs [sweep] param and grid");
    CsvWriter csv(cfg.output_path);
    const auto opts = mc_options(cfg, threads);
    for (double value : cfg.sweep_grid) {
        GaussMarkovModel model = cfg.model;
        RenewalSpec sampling = cfg.sampling;
        if (cfg.sweep_param == "a") {
            if (!cfg.scalar)
                throw std::invalid_argument("sweep over a requires model.type=scalar_ou");
            model = scalar_ou(value, cfg.snr_linear.value_or(1.0));
        } else if (cfg.sweep_param == "s") {
            sampling = cfg.sampling.scaled(value);
        } else if (cfg.sweep_param == "snr_db") {
            const double snr = std::pow(10.0, value / 10.0);
            model = cfg.scalar ? scalar_ou(cfg.scalar_a, snr)
                               : with_snr(cfg.model, snr);
        } else {
            throw std::invalid_argument("sweep.param must be a, s or snr_db");
        }
        emit_estimate(csv, cfg.sweep_param, value,
                      exponents::mc_exponent_h0_noise(model, sampling, opts));
        emit_estimate(csv, cfg.sweep_param, value,
                      exponents::mc_exponent_h0_signal(model, sampling, opts));
    }
    return 0;
}

int run_detect(const config::RunConfig& cfg)
{
    const auto orientation = cfg.detect_orientation == "h0signal"
                                 ? detection::Orientation::H0Signal
                                 : detection::Orientation::H0Noise;
    std::vector<detection::DetectionResult> results;
    for (std::int64_t n : cfg.detect_n) {
        results.push_back(detection::estimate_beta(cfg.model, cfg.sampling, n,
                                                   cfg.detect_epsilon,
                                                   cfg.detect_trials, orientation,
                                                   cfg.seed));
        const auto& r = results.back();
        std::cerr << "N=" << r.N << " beta_hat=" << r.beta_hat
                  << " rate_hat=" << r.rate_hat
                  << (r.censored ? " (censored)" : "") << "\n";
    }
    if (cfg.output_path.empty())
        detection::write_csv(results, "/dev/stdout");
    else
        detection::write_csv(results, cfg.output_path);
    return 0;
}

int run_dare(const config::RunConfig& cfg)
{
    CsvWriter csv(cfg.output_path);
    const auto phi = linalg::expm(cfg.model.A, -1.0);
    const auto q1 = linalg::gramian(cfg.model.A, cfg.model.B, 1.0);
    const auto pr = linalg::dare_solve(phi, cfg.model.C, q1);
    const auto [noise, signal] = exponents::regular_exponents(cfg.model);
    const double pr_scalar = pr.rows() == 1 ? pr(0, 0) : pr.trace();
    csv.row({"P_R", pr_scalar, "regular_closed_form_noise", noise, 0.0, 0,
             cfg.seed});
    csv.row({"P_R", pr_scalar, "regular_closed_form_signal", signal, 0.0, 0,
             cfg.seed});
    std::cerr << "P_R=" << pr_scalar << " xi_noise=" << noise
              << " xi_signal=" << signal << "\n";
    return 0;
}

int run_limits(const config::RunConfig& cfg)
{
    CsvWriter csv(cfg.output_path);
    const auto [noise, signal] = exponents::large_s_limits(cfg.model);
    const double snr = snr_of(cfg.model);
    csv.row({"snr", snr, "large_s_limit_noise", noise, 0.0, 0, cfg.seed});
    csv.row({"snr", snr, "large_s_limit_signal", signal, 0.0, 0, cfg.seed});
    std::cerr << "large-s limits: xi_noise=" << noise << " xi_signal=" << signal
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Error exponents for Neyman-Pearson detection of a "
                 "renewal-sampled Gauss-Markov process"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::int64_t seed = -1;
    int threads = 1;
    app.add_option("--config", config_path, "configuration file")->required();
    app.add_option("--out", out_path, "output CSV path (overrides config)");
    app.add_option("--seed", seed, "master seed (overrides config)");
    app.add_option("--threads", threads, "worker threads for replicates");

    auto* cmd_exponent =
        app.add_subcommand("exponent", "Monte Carlo error exponents");
    auto* cmd_sweep = app.add_subcommand("sweep", "exponents over a parameter grid");
    auto* cmd_detect = app.add_subcommand("detect", "empirical Type II error decay");
    auto* cmd_dare =
        app.add_subcommand("dare", "regular-sampling closed forms via the DARE");
    auto* cmd_limits = app.add_subcommand("limits", "large holding-time limits");

    CLI11_PARSE(app, argc, argv);

    gmdetect::config::RunConfig cfg;
    try {
        cfg = gmdetect::config::load_run_config(config_path);
    } catch (const gmdetect::linalg::StabilityError& e) {
        std::cerr << "invalid model: " << e.what() << "\n";
        return kExitModel;
    } catch (const gmdetect::ControllabilityError& e) {
        std::cerr << "invalid model: " << e.what() << "\n";
        return kExitModel;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    if (!out_path.empty()) cfg.output_path = out_path;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);

    try {
        if (cmd_exponent->parsed()) return run_exponent(cfg, threads);
        if (cmd_sweep->parsed()) return run_sweep(cfg, threads);
        if (cmd_detect->parsed()) return run_detect(cfg);
        if (cmd_dare->parsed()) return run_dare(cfg);
        if (cmd_limits->parsed()) return run_limits(cfg);
    } catch (const gmdetect::linalg::ConvergenceError& e) {
        std::cerr << "solver error: " << e.what()
                  << " (residual " << e.residual << ")\n";
        return kExitSolver;
    } catch (const gmdetect::linalg::StabilityError& e) {
        std::cerr << "invalid model: " << e.what() << "\n";
        return kExitModel;
    } catch (const gmdetect::ControllabilityError& e) {
        std::cerr << "invalid model: " << e.what() << "\n";
        return kExitModel;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
