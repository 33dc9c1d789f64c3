#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gmdetect/detection.hpp"
#include "gmdetect/exponents.hpp"
#include "gmdetect/kalman.hpp"

namespace py = pybind11;
using namespace gmdetect;

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Error exponents for Neyman-Pearson detection of a "
              "renewal-sampled Gauss-Markov process";

    py::class_<GaussMarkovModel>(m, "GaussMarkovModel")
        .def_readonly("A", &GaussMarkovModel::A)
        .def_readonly("B", &GaussMarkovModel::B)
        .def_readonly("C", &GaussMarkovModel::C)
        .def_readonly("Qinf", &GaussMarkovModel::Qinf)
        .def_property_readonly("snr", &snr_of);

    m.def("validate", &validate, py::arg("A"), py::arg("B"), py::arg("C"));
    m.def("scalar_ou", &scalar_ou, py::arg("a"), py::arg("snr"));
    m.def("with_snr", &with_snr, py::arg("model"), py::arg("snr"));

    py::class_<RenewalSpec>(m, "RenewalSpec")
        .def_static("regular", &RenewalSpec::regular, py::arg("s"))
        .def_static("poisson", &RenewalSpec::poisson, py::arg("lambda_"))
        .def_static("bernoulli", &RenewalSpec::bernoulli, py::arg("S"), py::arg("p"))
        .def_static("empirical", &RenewalSpec::empirical, py::arg("samples"))
        .def("mean", &RenewalSpec::mean)
        .def("scaled", &RenewalSpec::scaled, py::arg("factor"))
        .def("__repr__", &RenewalSpec::describe);

    m.def("expm", &linalg::expm, py::arg("m"), py::arg("t") = 1.0);
    m.def("gramian", &linalg::gramian, py::arg("A"), py::arg("B"), py::arg("x"));
    m.def("lyapunov_qinf", &linalg::lyapunov_qinf, py::arg("A"), py::arg("B"));
    m.def("dare_solve", &linalg::dare_solve, py::arg("phi"), py::arg("C"),
          py::arg("Q"), py::arg("tol") = 1e-12, py::arg("max_iter") = 100000);
    m.def("sigma_solve", &linalg::sigma_solve, py::arg("phi"), py::arg("G"),
          py::arg("C"), py::arg("tol") = 1e-12);

    py::enum_<exponents::Method>(m, "Method")
        .value("MonteCarloNoise", exponents::Method::MonteCarloNoise)
        .value("MonteCarloSignal", exponents::Method::MonteCarloSignal)
        .value("RegularClosedForm", exponents::Method::RegularClosedForm)
        .value("ScalarClosedForm", exponents::Method::ScalarClosedForm)
        .value("LargeSLimit", exponents::Method::LargeSLimit);

    py::class_<exponents::ExponentEstimate>(m, "ExponentEstimate")
        .def_readonly("value", &exponents::ExponentEstimate::value)
        .def_readonly("stderr", &exponents::ExponentEstimate::stderr_)
        .def_readonly("chain_length", &exponents::ExponentEstimate::chain_length)
        .def_readonly("burn_in", &exponents::ExponentEstimate::burn_in)
        .def_readonly("seed", &exponents::ExponentEstimate::seed)
        .def_readonly("method", &exponents::ExponentEstimate::method)
        .def("__repr__", [](const exponents::ExponentEstimate& e) {
            return "ExponentEstimate(value=" + std::to_string(e.value) +
                   ", stderr=" + std::to_string(e.stderr_) + ")";
        });

    auto make_opts = [](std::int64_t chain_length, std::int64_t burn_in,
                        std::uint64_t seed, int replicates) {
        exponents::McOptions opts;
        opts.chain_length = chain_length;
        opts.burn_in = burn_in;
        opts.seed = seed;
        opts.replicates = replicates;
        return opts;
    };

    m.def(
        "mc_exponent_h0_noise",
        [make_opts](const GaussMarkovModel& model, const RenewalSpec& sampling,
                    std::int64_t chain_length, std::int64_t burn_in,
                    std::uint64_t seed, int replicates) {
            return exponents::mc_exponent_h0_noise(
                model, sampling, make_opts(chain_length, burn_in, seed, replicates));
        },
        py::arg("model"), py::arg("sampling"), py::arg("chain_length") = 1000000,
        py::arg("burn_in") = -1, py::arg("seed") = 0, py::arg("replicates") = 1);
    m.def(
        "mc_exponent_h0_signal",
        [make_opts](const GaussMarkovModel& model, const RenewalSpec& sampling,
                    std::int64_t chain_length, std::int64_t burn_in,
                    std::uint64_t seed, int replicates) {
            return exponents::mc_exponent_h0_signal(
                model, sampling, make_opts(chain_length, burn_in, seed, replicates));
        },
        py::arg("model"), py::arg("sampling"), py::arg("chain_length") = 1000000,
        py::arg("burn_in") = -1, py::arg("seed") = 0, py::arg("replicates") = 1);

    m.def("regular_exponents", &exponents::regular_exponents, py::arg("model"));
    m.def("scalar_regular_exponents", &exponents::scalar_regular_exponents,
          py::arg("a"), py::arg("snr"));
    m.def("large_s_limits", &exponents::large_s_limits, py::arg("model"));

    py::enum_<detection::Orientation>(m, "Orientation")
        .value("H0Noise", detection::Orientation::H0Noise)
        .value("H0Signal", detection::Orientation::H0Signal);

    py::class_<detection::DetectionResult>(m, "DetectionResult")
        .def_readonly("N", &detection::DetectionResult::N)
        .def_readonly("epsilon", &detection::DetectionResult::epsilon)
        .def_readonly("threshold", &detection::DetectionResult::threshold)
        .def_readonly("beta_hat", &detection::DetectionResult::beta_hat)
        .def_readonly("rate_hat", &detection::DetectionResult::rate_hat)
        .def_readonly("censored", &detection::DetectionResult::censored);

    m.def("estimate_beta", &detection::estimate_beta, py::arg("model"),
          py::arg("sampling"), py::arg("N"), py::arg("epsilon"), py::arg("trials"),
          py::arg("orientation"), py::arg("seed") = 0);
}
