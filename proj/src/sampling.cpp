#include "gmdetect/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gmdetect {

namespace {

void check(bool ok, const char* msg)
{
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

RenewalSpec RenewalSpec::regular(double s)
{
    check(s > 0.0 && std::isfinite(s), "RenewalSpec::regular: s must be > 0");
    RenewalSpec spec;
    spec.kind = Kind::Regular;
    spec.s = s;
    return spec;
}

RenewalSpec RenewalSpec::poisson(double lambda)
{
    check(lambda > 0.0 && std::isfinite(lambda),
          "RenewalSpec::poisson: lambda must be > 0");
    RenewalSpec spec;
    spec.kind = Kind::Poisson;
    spec.lambda = lambda;
    return spec;
}

RenewalSpec RenewalSpec::bernoulli(double S, double p)
{
    check(S > 0.0 && std::isfinite(S), "RenewalSpec::bernoulli: S must be > 0");
    check(p > 0.0 && p <= 1.0, "RenewalSpec::bernoulli: p must be in (0, 1]");
    RenewalSpec spec;
    spec.kind = Kind::Bernoulli;
    spec.S = S;
    spec.p = p;
    return spec;
}

RenewalSpec RenewalSpec::empirical(std::vector<double> samples)
{
    check(!samples.empty(), "RenewalSpec::empirical: no samples");
    bool any_positive = false;
    for (double x : samples) {
        check(x >= 0.0 && std::isfinite(x),
              "RenewalSpec::empirical: samples must be finite and >= 0");
        any_positive = any_positive || x > 0.0;
    }
    // tau({0}) < 1
    check(any_positive, "RenewalSpec::empirical: all samples are zero");
    RenewalSpec spec;
    spec.kind = Kind::Empirical;
    spec.samples = std::move(samples);
    return spec;
}

RenewalSpec RenewalSpec::empirical_from_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open holding-times file: " + path);
    std::vector<double> samples;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double x;
        if (!(ls >> x))
            throw std::invalid_argument("bad holding-time line: " + line);
        samples.push_back(x);
    }
    return empirical(std::move(samples));
}

double RenewalSpec::draw(RngStream& rng) const
{
    switch (kind) {
        case Kind::Regular:
            return s;
        case Kind::Poisson:
            return rng.exponential(lambda);
        case Kind::Bernoulli: {
            if (p >= 1.0) return S;
            // geometric on {1, 2, ...} by inverse CDF
            const double u = rng.uniform();
            const double k = std::ceil(std::log(u) / std::log(1.0 - p));
            return S * std::max(1.0, k);
        }
        case Kind::Empirical: {
            const std::size_t idx = static_cast<std::size_t>(
                rng.uniform() * static_cast<double>(samples.size()));
            return samples[std::min(idx, samples.size() - 1)];
        }
    }
    throw std::logic_error("RenewalSpec::draw: bad kind");
}

double RenewalSpec::mean() const
{
    switch (kind) {
        case Kind::Regular:
            return s;
        case Kind::Poisson:
            return 1.0 / lambda;
        case Kind::Bernoulli:
            return S / p;
        case Kind::Empirical:
            return std::accumulate(samples.begin(), samples.end(), 0.0) /
                   static_cast<double>(samples.size());
    }
    throw std::logic_error("RenewalSpec::mean: bad kind");
}

RenewalSpec RenewalSpec::scaled(double factor) const
{
    check(factor > 0.0 && std::isfinite(factor),
          "RenewalSpec::scaled: factor must be > 0");
    RenewalSpec spec = *this;
    switch (kind) {
        case Kind::Regular:
            spec.s = s * factor;
            break;
        case Kind::Poisson:
            spec.lambda = lambda / factor;
            break;
        case Kind::Bernoulli:
            spec.S = S * factor;
            break;
        case Kind::Empirical:
            for (double& x : spec.samples) x *= factor;
            break;
    }
    return spec;
}

std::string RenewalSpec::describe() const
{
    std::ostringstream os;
    switch (kind) {
        case Kind::Regular:
            os << "regular(s=" << s << ")";
            break;
        case Kind::Poisson:
            os << "poisson(lambda=" << lambda << ")";
            break;
        case Kind::Bernoulli:
            os << "bernoulli(S=" << S << ", p=" << p << ")";
            break;
        case Kind::Empirical:
            os << "empirical(n=" << samples.size() << ")";
            break;
    }
    return os.str();
}

std::vector<double> draw_holding_times(const RenewalSpec& spec, std::size_t n,
                                       RngStream& rng)
{
    check(n >= 1, "draw_holding_times: n must be >= 1");
    std::vector<double> out(n);
    for (double& x : out) x = spec.draw(rng);
    return out;
}

}  // namespace gmdetect
