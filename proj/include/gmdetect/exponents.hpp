#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gmdetect/model.hpp"
#include "gmdetect/sampling.hpp"

namespace gmdetect::exponents {

enum class Method {
    MonteCarloNoise,
    MonteCarloSignal,
    RegularClosedForm,
    ScalarClosedForm,
    LargeSLimit,
};

const char* method_name(Method m);

struct ExponentEstimate {
    double value = 0.0;   // nats per sample
    double stderr_ = 0.0;  // batch-means standard error; 0 for closed forms
    std::int64_t chain_length = 0;
    std::int64_t burn_in = 0;
    std::uint64_t seed = 0;
    Method method = Method::MonteCarloNoise;
};

struct McOptions {
    std::int64_t chain_length = 1000000;
    std::int64_t burn_in = -1;  // <0: max(1000, chain_length/100)
    std::uint64_t seed = 0;
    int replicates = 1;  // independent chains, pooled deterministically
    int threads = 1;     // worker threads across replicates
};

// xi_H0:Noise by ergodic averaging of
//   (1/2) { logdet(C P C^T + I) + tr[ C (x x^T - P) C^T (C P C^T + I)^-1 ] }
// along the Kalman chain driven by Y ~ N(0, I_d) and I ~ tau.
ExponentEstimate mc_exponent_h0_noise(const GaussMarkovModel& model,
                                      const RenewalSpec& sampling,
                                      const McOptions& opts);

// xi_H0:Signal = (1/2) { tr(C Qinf C^T) - E[ logdet(C P C^T + I) ] }
// over the covariance-only chain (Y-independent).
ExponentEstimate mc_exponent_h0_signal(const GaussMarkovModel& model,
                                       const RenewalSpec& sampling,
                                       const McOptions& opts);

// Regular unit sampling closed forms via the DARE solution P_R and the
// Stein equation for Sigma.
std::pair<double, double> regular_exponents(const GaussMarkovModel& model);

// Scalar regular-sampling closed forms (quadratic formula for P_R).
std::pair<double, double> scalar_regular_exponents(double a, double snr);
double scalar_regular_pr(double a, double snr);

// Large holding time limits: the two Gaussian KL divergences between
// N(0, I) and N(0, C Qinf C^T + I).
std::pair<double, double> large_s_limits(const GaussMarkovModel& model);

// xi_H0:Signal over an increasing a grid with common random numbers
// (identical holding-time stream at every grid point).
std::vector<ExponentEstimate> monotonicity_scan(double snr,
                                                const std::vector<double>& a_grid,
                                                const RenewalSpec& sampling,
                                                std::int64_t chain_length,
                                                std::uint64_t seed);

}  // namespace gmdetect::exponents
