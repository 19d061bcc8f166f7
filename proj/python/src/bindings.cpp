#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "randns/app.hpp"
#include "randns/datum.hpp"
#include "randns/errors.hpp"
#include "randns/galerkin.hpp"
#include "randns/heatflow.hpp"
#include "randns/randomize.hpp"
#include "randns/spectral.hpp"
#include "randns/verify.hpp"

namespace py = pybind11;
using namespace randns;

namespace {

std::vector<py::ssize_t> field_shape(const GridSpec& g) {
    std::vector<py::ssize_t> shape{g.dim};
    for (int j = 0; j < g.dim; ++j) shape.push_back(g.side());
    return shape;
}

py::array_t<cplx> to_numpy(const SpectralField& f) {
    py::array_t<cplx> out(field_shape(f.grid()));
    std::copy(f.coeffs().begin(), f.coeffs().end(), out.mutable_data());
    return out;
}

SpectralField from_numpy(const GridSpec& g, py::array_t<cplx, py::array::c_style | py::array::forcecast> a) {
    const auto shape = field_shape(g);
    if (a.ndim() != static_cast<py::ssize_t>(shape.size())) throw std::invalid_argument("coefficient array has wrong rank");
    for (std::size_t k = 0; k < shape.size(); ++k) {
        if (a.shape(k) != shape[k]) throw std::invalid_argument("coefficient array has wrong shape");
    }
    std::vector<cplx> c(a.data(), a.data() + a.size());
    return SpectralField(g, std::move(c));
}

py::dict trace_dict(const EnergyTrace& t) {
    py::dict d;
    d["t"] = t.t;
    d["l2sq"] = t.l2sq;
    d["grad_sq"] = t.grad_sq;
    d["cum_enstrophy"] = t.cum_enstrophy;
    d["energy_E"] = t.energy_E;
    d["energy_E_half"] = t.energy_E_half;
    d["dwdt_hm1"] = t.dwdt_hm1;
    d["dual_rate"] = t.dual_rate;
    d["g_norm"] = t.g_norm;
    return d;
}

}  // namespace

PYBIND11_MODULE(_randns, m) {
    m.doc() = "Spectral Navier-Stokes toolkit with randomized rough data";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<GridMismatch>(m, "GridMismatch", PyExc_ValueError);
    py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<int, int, double>(), py::arg("dim"), py::arg("M"), py::arg("pad_factor") = 4.0)
        .def_readonly("dim", &GridSpec::dim)
        .def_readonly("M", &GridSpec::M)
        .def_property_readonly("side", &GridSpec::side)
        .def("product_points", &GridSpec::product_points)
        .def("__repr__", [](const GridSpec& g) {
            return "GridSpec(dim=" + std::to_string(g.dim) + ", M=" + std::to_string(g.M) + ")";
        });

    py::class_<SpectralField>(m, "SpectralField")
        .def(py::init<const GridSpec&>())
        .def(py::init(&from_numpy), py::arg("grid"), py::arg("coefficients"))
        .def_property_readonly("grid", &SpectralField::grid)
        .def("coefficients", &to_numpy)
        .def("hermitian_defect", &SpectralField::hermitian_defect)
        .def("divergence_defect", &SpectralField::divergence_defect, py::arg("floor") = 1e-13)
        .def("max_abs", &SpectralField::max_abs)
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(double() * py::self)
        .def(py::self == py::self);

    m.def("taylor_green", &taylor_green, py::arg("grid"), py::arg("amplitude") = 1.0);
    m.def("abc_flow", &abc_flow, py::arg("grid"), py::arg("A") = 1.0, py::arg("B") = 1.0, py::arg("C") = 1.0);
    m.def("rough_datum", &rough_datum, py::arg("grid"), py::arg("decay"), py::arg("seed"), py::arg("amplitude") = 1.0);
    m.def("rough_decay", &rough_decay);

    m.def("leray_project", &leray_project);
    m.def("sobolev_norm", &sobolev_norm, py::arg("f"), py::arg("s"));
    m.def("homogeneous_norm", &homogeneous_norm, py::arg("f"), py::arg("s"));
    m.def("lp_norm", &lp_norm, py::arg("f"), py::arg("p"));
    m.def("nonlinear_term", &nonlinear_term);
    m.def("heat_flow", &heat_flow, py::arg("f"), py::arg("t"));
    m.def("randomize",
          [](const SpectralField& f, const std::string& law, std::uint64_t seed, std::uint64_t sample) {
              return randomize(f, parse_law(law), {seed, sample});
          },
          py::arg("f"), py::arg("law") = "gaussian", py::arg("seed") = 0, py::arg("sample") = 0);

    m.def("mixed_norm",
          [](const SpectralField& f, double sigma, double gamma, double p, double q, double T, double alpha,
             double t_min, int points) {
              NormProbeSpec s{sigma, gamma, p, q, T, alpha, t_min, points};
              return mixed_norm(f, s);
          },
          py::arg("f"), py::arg("sigma"), py::arg("gamma"), py::arg("p"), py::arg("q"), py::arg("T") = 1.0,
          py::arg("alpha") = 0.0, py::arg("t_min") = 1e-6, py::arg("points") = 400);

    m.def("exceedance",
          [](const SpectralField& f, const std::string& law, double alpha, double gamma, double T,
             std::vector<double> lambdas, std::size_t samples, std::uint64_t seed, int workers) {
              const auto probes = standard_probes(f.grid().dim, alpha, gamma, T);
              auto r = monte_carlo_exceedance(f, parse_law(law), probes, {}, samples, seed, workers);
              if (lambdas.empty()) lambdas = default_lambdas(r.norms);
              r = exceedance_from_norms(std::move(r.norms), lambdas);
              py::dict d;
              d["lambda"] = r.lambda;
              d["p_hat"] = r.p_hat;
              d["ci_lo"] = r.ci_lo;
              d["ci_hi"] = r.ci_hi;
              d["slope"] = r.slope;
              d["r2"] = r.r2;
              d["n_samples"] = r.n_samples;
              d["norms"] = r.norms;
              return d;
          },
          py::arg("f"), py::arg("law") = "gaussian", py::arg("alpha") = 0.3, py::arg("gamma") = -0.05,
          py::arg("T") = 1.0, py::arg("lambdas") = std::vector<double>{}, py::arg("samples") = 200,
          py::arg("seed") = 0, py::arg("workers") = 1);

    m.def("solve",
          [](const SpectralField& f, double T, double dt, double c1, double c2, const std::string& integrator,
             std::optional<SpectralField> w0, bool duhamel) {
              DifferenceEqParams p;
              p.T = T;
              p.dt = dt;
              p.c1 = c1;
              p.c2 = c2;
              p.integrator = parse_integrator(integrator);
              TrajectoryRecord rec;
              {
                  py::gil_scoped_release release;
                  rec = solve(f, p, w0);
              }
              py::dict d;
              d["times"] = rec.times;
              d["final"] = rec.final_state();
              d["steps"] = rec.steps;
              d["trace"] = trace_dict(rec.trace);
              d["rate_norm"] = rate_norm(rec.trace, f.grid().dim);
              if (duhamel) d["duhamel_residual"] = duhamel_residual(rec, f);
              return d;
          },
          py::arg("f"), py::arg("T") = 1.0, py::arg("dt") = 2.5e-4, py::arg("c1") = -1.0, py::arg("c2") = -1.0,
          py::arg("integrator") = "exponential-rk4", py::arg("w0") = py::none(), py::arg("duhamel") = false);

    m.def("interpolation_ratio", &interpolation_ratio);
    m.attr("INTERPOLATION_CONSTANT") = kInterpolationConstant;

    m.def("validate_config",
          [](const std::map<std::string, std::string>& values) {
              app::RunConfig cfg;
              for (const auto& [k, v] : values) cfg.set(k, v);
              cfg.validate();
              return cfg.to_json().dump();
          },
          py::arg("values"));
}
