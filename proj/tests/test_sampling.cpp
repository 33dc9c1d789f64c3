#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <vector>

#include "gmdetect/sampling.hpp"

using namespace gmdetect;

namespace {

// One-sample Kolmogorov-Smirnov statistic against a cdf
template <class Cdf>
double ks_statistic(std::vector<double> draws, Cdf cdf)
{
    std::sort(draws.begin(), draws.end());
    const double n = static_cast<double>(draws.size());
    double d = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const double f = cdf(draws[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    }
    return d;
}

}  // namespace

TEST_CASE("regular law is deterministic")
{
    const auto spec = RenewalSpec::regular(0.7);
    RngStream rng(1);
    for (int i = 0; i < 10; ++i) CHECK(spec.draw(rng) == 0.7);
    CHECK(spec.mean() == 0.7);
}

TEST_CASE("poisson law: mean and KS fit")
{
    const double lambda = 2.0;
    const auto spec = RenewalSpec::poisson(lambda);
    CHECK(spec.mean() == doctest::Approx(0.5).epsilon(1e-14));

    RngStream rng(42);
    std::vector<double> draws(1000000);
    for (auto& x : draws) x = spec.draw(rng);
    const double d = ks_statistic(std::move(draws), [&](double x) {
        return 1.0 - std::exp(-lambda * x);
    });
    CHECK(d < 0.002);
}

TEST_CASE("bernoulli law: support, pmf and mean")
{
    const double S = 0.5;
    const double p = 0.3;
    const auto spec = RenewalSpec::bernoulli(S, p);
    CHECK(spec.mean() == doctest::Approx(S / p).epsilon(1e-14));

    RngStream rng(7);
    const std::size_t n = 1000000;
    std::map<long, std::size_t> counts;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = spec.draw(rng);
        const long k = std::lround(x / S);
        CHECK(std::abs(x - k * S) < 1e-12);  // support is {S, 2S, ...}
        CHECK(k >= 1);
        ++counts[k];
    }
    for (long k = 1; k <= 5; ++k) {
        const double expected = p * std::pow(1.0 - p, k - 1);
        const double observed = static_cast<double>(counts[k]) / n;
        CHECK(observed == doctest::Approx(expected).epsilon(0.02));
    }
}

TEST_CASE("bernoulli with p = 1 degenerates to regular spacing")
{
    const auto spec = RenewalSpec::bernoulli(0.25, 1.0);
    RngStream rng(3);
    for (int i = 0; i < 100; ++i) CHECK(spec.draw(rng) == doctest::Approx(0.25));
}

TEST_CASE("empirical law resamples the given support")
{
    const std::vector<double> support{0.5, 1.0, 2.5};
    const auto spec = RenewalSpec::empirical(support);
    CHECK(spec.mean() == doctest::Approx(4.0 / 3.0).epsilon(1e-14));

    RngStream rng(9);
    std::map<double, std::size_t> counts;
    const std::size_t n = 300000;
    for (std::size_t i = 0; i < n; ++i) ++counts[spec.draw(rng)];
    CHECK(counts.size() == 3);
    for (double v : support)
        CHECK(static_cast<double>(counts[v]) / n ==
              doctest::Approx(1.0 / 3.0).epsilon(0.02));

    CHECK_THROWS(RenewalSpec::empirical({}));
    CHECK_THROWS(RenewalSpec::empirical({1.0, -0.5}));
}

TEST_CASE("empirical_from_file parses one value per line")
{
    const std::string path = "test_sampling_empirical.txt";
    {
        std::ofstream out(path);
        out << "# holding times\n0.5\n\n1.5\n2.0\n";
    }
    const auto spec = RenewalSpec::empirical_from_file(path);
    CHECK(spec.samples.size() == 3);
    CHECK(spec.mean() == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    std::remove(path.c_str());

    CHECK_THROWS(RenewalSpec::empirical_from_file("no_such_file.txt"));
}

TEST_CASE("scaled law multiplies every holding time by the factor")
{
    SUBCASE("regular") {
        CHECK(RenewalSpec::regular(1.0).scaled(4.0).mean() ==
              doctest::Approx(4.0));
    }
    SUBCASE("poisson keeps exponential shape") {
        const auto spec = RenewalSpec::poisson(1.0).scaled(2.0);
        CHECK(spec.mean() == doctest::Approx(2.0));
        RngStream rng(5);
        std::vector<double> draws(200000);
        for (auto& x : draws) x = spec.draw(rng);
        const double d = ks_statistic(std::move(draws), [](double x) {
            return 1.0 - std::exp(-0.5 * x);
        });
        CHECK(d < 0.005);
    }
    SUBCASE("bernoulli stretches the grid") {
        const auto spec = RenewalSpec::bernoulli(1.0, 0.5).scaled(2.0);
        CHECK(spec.S == doctest::Approx(2.0));
        CHECK(spec.p == doctest::Approx(0.5));
    }
    SUBCASE("empirical scales each sample") {
        const auto spec = RenewalSpec::empirical({1.0, 3.0}).scaled(2.0);
        CHECK(spec.samples[0] == doctest::Approx(2.0));
        CHECK(spec.samples[1] == doctest::Approx(6.0));
    }
    CHECK_THROWS(RenewalSpec::regular(1.0).scaled(0.0));
}

TEST_CASE("draw_holding_times reproducibility")
{
    const auto spec = RenewalSpec::poisson(1.0);
    RngStream a(123), b(123), c(124);
    const auto xs = draw_holding_times(spec, 1000, a);
    const auto ys = draw_holding_times(spec, 1000, b);
    const auto zs = draw_holding_times(spec, 1000, c);
    CHECK(xs == ys);
    CHECK(xs != zs);
}

TEST_CASE("invalid parameters rejected")
{
    CHECK_THROWS(RenewalSpec::regular(0.0));
    CHECK_THROWS(RenewalSpec::regular(-1.0));
    CHECK_THROWS(RenewalSpec::poisson(0.0));
    CHECK_THROWS(RenewalSpec::bernoulli(1.0, 0.0));
    CHECK_THROWS(RenewalSpec::bernoulli(1.0, 1.5));
    CHECK_THROWS(RenewalSpec::bernoulli(0.0, 0.5));
}

TEST_CASE("describe names the law")
{
    CHECK(RenewalSpec::regular(1.0).describe().find("regular") !=
          std::string::npos);
    CHECK(RenewalSpec::poisson(2.0).describe().find("poisson") !=
          std::string::npos);
}
