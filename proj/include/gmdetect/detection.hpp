#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gmdetect/model.hpp"
#include "gmdetect/sampling.hpp"

namespace gmdetect::detection {

// Which hypothesis plays the null: pure noise or signal plus noise.
enum class Orientation { H0Noise, H0Signal };

struct DetectionResult {
    std::int64_t N = 0;       // samples per trial
    double epsilon = 0.0;     // false alarm budget
    double threshold = 0.0;   // empirical quantile of the H0 statistic
    double beta_hat = 0.0;    // Type II error estimate
    std::int64_t trials_h0 = 0;
    std::int64_t trials_h1 = 0;
    double rate_hat = 0.0;    // -log(beta_hat)/N
    bool censored = false;    // beta_hat below 10/trials: upper bound only
    Orientation orientation = Orientation::H0Noise;
};

// Neyman-Pearson test at the Monte Carlo level: the threshold is the
// empirical (1 - epsilon)-quantile of the null-sample test statistic
// (-L_N for H0Noise, L_N for H0Signal; large values reject the null).
// Fresh holding times are drawn for every trial.
DetectionResult estimate_beta(const GaussMarkovModel& model,
                              const RenewalSpec& sampling, std::int64_t N,
                              double epsilon, std::int64_t trials,
                              Orientation orientation, std::uint64_t seed);

// Replicate mean of the null-orientation statistic (L_N resp. -L_N) with a
// normal-approximation confidence halfwidth (3 sigma).
struct LlrConvergence {
    double mean = 0.0;
    double ci_halfwidth = 0.0;
};

LlrConvergence llr_convergence_check(const GaussMarkovModel& model,
                                     const RenewalSpec& sampling,
                                     std::int64_t N, int replicates,
                                     Orientation orientation,
                                     std::uint64_t seed);

// CSV with columns N, epsilon, beta_hat, rate_hat, censored.
void write_csv(const std::vector<DetectionResult>& results,
               const std::string& path);

}  // namespace gmdetect::detection
