#pragma once

#include <string>
#include <vector>

#include "gmdetect/rng.hpp"

namespace gmdetect {

// Renewal law tau of the holding times I_k between samples.
struct RenewalSpec {
    enum class Kind { Regular, Poisson, Bernoulli, Empirical };

    Kind kind = Kind::Regular;
    double s = 1.0;       // Regular: constant spacing
    double lambda = 1.0;  // Poisson: Exp(lambda) holding times
    double S = 1.0;       // Bernoulli: sampling period
    double p = 1.0;       // Bernoulli: success probability, support {S, 2S, ...}
    std::vector<double> samples;  // Empirical: resampled with replacement

    static RenewalSpec regular(double s);
    static RenewalSpec poisson(double lambda);
    static RenewalSpec bernoulli(double S, double p);
    static RenewalSpec empirical(std::vector<double> samples);
    // plain text, one nonnegative decimal per line
    static RenewalSpec empirical_from_file(const std::string& path);

    double draw(RngStream& rng) const;
    double mean() const;

    // law of s * I
    RenewalSpec scaled(double factor) const;

    std::string describe() const;
};

std::vector<double> draw_holding_times(const RenewalSpec& spec, std::size_t n,
                                       RngStream& rng);

}  // namespace gmdetect
