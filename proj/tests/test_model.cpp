#include <doctest.h>

#include <cmath>

#include "gmdetect/model.hpp"
#include "gmdetect/sampling.hpp"

using namespace gmdetect;

namespace {

GaussMarkovModel rlc_model()
{
    Matrix a(2, 2), b(2, 1);
    a << 0, -1, 1, 1;
    b << 0, 1;
    return validate(a, b, Matrix::Identity(2, 2));
}

}  // namespace

TEST_CASE("validate accepts the RLC model")
{
    const auto model = rlc_model();
    CHECK(model.q() == 2);
    CHECK(model.p() == 1);
    CHECK(model.d() == 2);
    CHECK((model.Qinf - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
          1e-10);
    CHECK(snr_of(model) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("validate rejects bad inputs")
{
    const Matrix i2 = Matrix::Identity(2, 2);
    SUBCASE("dimension mismatches") {
        CHECK_THROWS_AS(validate(Matrix::Zero(2, 3), i2, i2),
                        linalg::DimensionError);
        CHECK_THROWS_AS(validate(i2, Matrix::Zero(3, 1), i2),
                        linalg::DimensionError);
        CHECK_THROWS_AS(validate(i2, i2, Matrix::Zero(2, 3)),
                        linalg::DimensionError);
    }
    SUBCASE("non positive-stable A") {
        CHECK_THROWS_AS(validate(Matrix::Constant(1, 1, -1.0),
                                 Matrix::Constant(1, 1, 1.0),
                                 Matrix::Constant(1, 1, 1.0)),
                        linalg::StabilityError);
    }
    SUBCASE("uncontrollable pair") {
        // A diagonal, B exciting only the first coordinate
        Matrix b(2, 1);
        b << 1, 0;
        CHECK_THROWS_AS(validate(i2, b, i2), ControllabilityError);
    }
    SUBCASE("non-finite entries") {
        Matrix a = Matrix::Identity(1, 1);
        a(0, 0) = std::nan("");
        CHECK_THROWS(validate(a, Matrix::Constant(1, 1, 1.0),
                              Matrix::Constant(1, 1, 1.0)));
    }
}

TEST_CASE("scalar_ou carries the requested SNR")
{
    for (double a : {0.1, 1.0, 5.0}) {
        for (double snr : {0.5, 1.0, 2.0}) {
            const auto model = scalar_ou(a, snr);
            CHECK(model.A(0, 0) == a);
            CHECK(model.C(0, 0) == 1.0);
            CHECK(model.Qinf(0, 0) == doctest::Approx(snr).epsilon(1e-12));
            CHECK(model.B(0, 0) ==
                  doctest::Approx(std::sqrt(2.0 * a * snr)).epsilon(1e-12));
            CHECK(snr_of(model) == doctest::Approx(snr).epsilon(1e-12));
        }
    }
    CHECK_THROWS(scalar_ou(0.0, 1.0));
    CHECK_THROWS(scalar_ou(1.0, 0.0));
}

TEST_CASE("with_snr rescales C only")
{
    const auto base = rlc_model();
    const auto scaled = with_snr(base, 2.0);
    CHECK(snr_of(scaled) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK((scaled.A - base.A).cwiseAbs().maxCoeff() == 0.0);
    CHECK((scaled.B - base.B).cwiseAbs().maxCoeff() == 0.0);
    CHECK((scaled.C - 2.0 * base.C).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS(with_snr(base, -1.0));
}

TEST_CASE("simulate_path shapes and hypothesis semantics")
{
    const auto model = scalar_ou(1.0, 1.0);
    RngStream rng(11);
    const std::vector<double> times{1.0, 0.5, 2.0};

    const auto h1 = simulate_path(model, times, Hypothesis::H1, rng);
    CHECK(h1.size() == 3);
    CHECK(h1.states.size() == 3);
    CHECK(h1.observations.size() == 3);
    CHECK(h1.hypothesis == Hypothesis::H1);

    // Under H0 the observations are pure noise: empirically unit variance,
    // uncorrelated with the holding times' signal path.
    RngStream rng0(11);
    const std::vector<double> one(20000, 1.0);
    const auto h0 = simulate_path(model, one, Hypothesis::H0, rng0);
    double m1 = 0.0, m2 = 0.0;
    for (const auto& y : h0.observations) {
        m1 += y(0);
        m2 += y(0) * y(0);
    }
    m1 /= static_cast<double>(h0.size());
    m2 /= static_cast<double>(h0.size());
    CHECK(m1 == doctest::Approx(0.0).epsilon(1.0).scale(0.05));
    CHECK(m2 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("simulate_path with zero holding times repeats the state")
{
    const auto model = rlc_model();
    RngStream rng(5);
    const std::vector<double> times{1.0, 0.0, 0.0, 1.0};
    const auto path = simulate_path(model, times, Hypothesis::H1, rng);
    CHECK((path.states[1] - path.states[0]).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((path.states[2] - path.states[0]).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((path.states[3] - path.states[2]).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("simulate_path is bit-for-bit reproducible")
{
    const auto model = rlc_model();
    const auto spec = RenewalSpec::poisson(1.0);
    RngStream t(77);
    const auto times = draw_holding_times(spec, 500, t);

    RngStream a(99), b(99);
    const auto pa = simulate_path(model, times, Hypothesis::H1, a);
    const auto pb = simulate_path(model, times, Hypothesis::H1, b);
    for (std::size_t n = 0; n < pa.size(); ++n) {
        CHECK(pa.states[n] == pb.states[n]);
        CHECK(pa.observations[n] == pb.observations[n]);
    }
}

TEST_CASE("simulate_path state marginals are stationary at Qinf")
{
    const auto model = scalar_ou(1.0, 2.0);
    RngStream rng(31);
    const std::vector<double> times(200000, 0.5);
    const auto path = simulate_path(model, times, Hypothesis::H1, rng);
    double m2 = 0.0;
    for (const auto& x : path.states) m2 += x(0) * x(0);
    m2 /= static_cast<double>(path.size());
    // autocorrelated draws: generous 3-sigma-ish band
    CHECK(m2 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("gramian_q matches linalg::gramian")
{
    const auto model = rlc_model();
    for (double x : {0.0, 0.5, 2.0}) {
        CHECK((gramian_q(model, x) - linalg::gramian(model.A, model.B, x))
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    }
}
