#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hamsys/pipeline.hpp"

namespace py = pybind11;
using namespace hamsys;

namespace {

Domain make_domain(const std::string& kind, double a, double b) {
    if (kind == "interval") return Domain::interval(a);
    if (kind == "rectangle") return Domain::rectangle(a, b);
    if (kind == "disk") return Domain::disk(a);
    throw std::invalid_argument("unknown domain kind '" + kind + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "spectral solver for Dirichlet Hamiltonian elliptic systems";

    m.def(
        "classify",
        [](double p, double q, double alpha, double beta, int N) {
            ExponentPair e{p, q, alpha, beta, N};
            e.validate();
            Classification cl = classify(e);
            py::dict d;
            d["H1"] = cl.H1;
            d["H2"] = cl.H2;
            d["H3"] = cl.H3;
            d["H4"] = cl.H4;
            d["H4_prime"] = cl.H4p;
            d["regime"] = cl.regime_name();
            d["hyperbola"] = cl.hyperbola_name();
            return d;
        },
        py::arg("p"), py::arg("q"), py::arg("alpha") = 0.0, py::arg("beta") = 0.0,
        py::arg("N") = 2);

    m.def(
        "eigenvalues",
        [](const std::string& kind, double a, double b, int M) {
            BasisPtr bs = Basis::build(make_domain(kind, a, b), M);
            return std::vector<double>(bs->lambda.data(), bs->lambda.data() + bs->M);
        },
        py::arg("kind"), py::arg("a"), py::arg("b") = 0.0, py::arg("modes") = 16);

    m.def(
        "ground_state_level",
        [](double p, double q, const std::string& kind, double a, double b, int modes,
           const std::string& framework, double alpha, double beta) {
            RunConfig cfg;
            cfg.dom = make_domain(kind, a, b);
            cfg.problem = {p, q, alpha, beta, cfg.dom.N};
            cfg.modes = modes;
            Framework f = parse_framework(framework);
            BasisPtr basis = f == Framework::ShootingOracle
                                 ? nullptr
                                 : Basis::build(cfg.dom, modes);
            FrameworkResult r = run_framework(f, cfg, basis);
            if (!r.converged) throw std::runtime_error(r.message);
            return r.c;
        },
        py::arg("p"), py::arg("q"), py::arg("kind"), py::arg("a"), py::arg("b") = 0.0,
        py::arg("modes") = 48, py::arg("framework") = "inversion",
        py::arg("alpha") = 0.0, py::arg("beta") = 0.0);

    m.def(
        "solve",
        [](const std::string& ini) {
            RunConfig cfg = parse_config_text(ini, "<config>");
            RunOutcome out = run_solve(cfg, false);
            return py::make_tuple(out.verified, out.manifest.dump(2));
        },
        py::arg("config_text"),
        "Run the configured frameworks; returns (verified, manifest_json).");
}
