#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmod/amplitude.hpp"
#include "qmod/bessel.hpp"
#include "qmod/errors.hpp"
#include "qmod/figures.hpp"
#include "qmod/qubit_state.hpp"
#include "qmod/speed_metrics.hpp"
#include "qmod/witness.hpp"

namespace py = pybind11;
using namespace qmod;

namespace {

template <class T>
py::array_t<T> to_array(const std::vector<T>& v)
{
    return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict metrics_dict(const SpeedMetrics& m)
{
    py::dict d;
    d["tau"] = m.tau;
    d["n_blp"] = m.n_blp;
    d["qslt_ratio"] = m.qslt_ratio;
    d["qslt_ratio_op"] = m.qslt_ratio_op;
    d["qslt_ratio_tr"] = m.qslt_ratio_tr;
    d["qslt_ratio_hs"] = m.qslt_ratio_hs;
    d["r_g"] = m.r_g ? py::cast(*m.r_g) : py::none();
    return d;
}

} // namespace

PYBIND11_MODULE(_qmod_dyn, m)
{
    m.doc() = "Frequency-modulated qubit in a Lorentzian reservoir";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<SolverFailure>(m, "SolverFailure", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::enum_<TimeUnit>(m, "TimeUnit")
        .value("GAMMA", TimeUnit::Gamma)
        .value("LAMBDA", TimeUnit::Lambda)
        .value("ABSOLUTE", TimeUnit::Absolute);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](double gamma, double lambda, double delta, double omega, double theta, double phi,
                         TimeUnit unit) {
                 ModelParams p{gamma, lambda, delta, omega, theta, phi, unit};
                 p.validate();
                 return p;
             }),
             py::arg("gamma") = 1.0, py::arg("lambda_") = 1.0, py::arg("delta") = 0.0, py::arg("omega") = 0.0,
             py::arg("theta") = 0.0, py::arg("phi") = 0.0, py::arg("unit") = TimeUnit::Absolute)
        .def_readwrite("gamma", &ModelParams::gamma)
        .def_readwrite("lambda_", &ModelParams::lambda)
        .def_readwrite("delta", &ModelParams::delta)
        .def_readwrite("omega", &ModelParams::omega_mod)
        .def_readwrite("theta", &ModelParams::theta)
        .def_readwrite("phi", &ModelParams::phi)
        .def_readwrite("unit", &ModelParams::unit)
        .def("validate", &ModelParams::validate)
        .def("__repr__", [](const ModelParams& p) { return "ModelParams(" + p.describe() + ")"; });

    py::class_<AmplitudeTrajectory>(m, "AmplitudeTrajectory")
        .def_property_readonly("times", [](const AmplitudeTrajectory& t) { return to_array(t.times); })
        .def_property_readonly("c", [](const AmplitudeTrajectory& t) { return to_array(t.c); })
        .def_property_readonly("c_dot", [](const AmplitudeTrajectory& t) { return to_array(t.c_dot); })
        .def_readonly("params", &AmplitudeTrajectory::params)
        .def_property_readonly("solver_tag",
                               [](const AmplitudeTrajectory& t) { return std::string(to_string(t.solver_tag)); })
        .def("interpolate", &AmplitudeTrajectory::interpolate)
        .def("__len__", &AmplitudeTrajectory::size);

    m.def("bessel_j", &bessel::bessel_j, py::arg("n"), py::arg("x"));
    m.def("first_zero", &bessel::first_zero, py::arg("n"));
    m.def("jacobi_anger_residual", &bessel::jacobi_anger_residual, py::arg("ratio"), py::arg("t"), py::arg("omega"),
          py::arg("n_max") = 50);
    m.def("tune_bessel", &tune_bessel, py::arg("n"), py::arg("omega"));

    m.def("kernel", &kernel, py::arg("params"), py::arg("t"), py::arg("t_prime"));
    m.def(
        "solve_ode_reform",
        [](const ModelParams& p, double t_end, std::size_t n, double rel, double abs) {
            return solve_ode_reform(p, t_end, n, Tolerances{rel, abs});
        },
        py::arg("params"), py::arg("t_end"), py::arg("n_points"), py::arg("rel_tol") = 1e-9,
        py::arg("abs_tol") = 1e-12);
    m.def("solve_volterra", &solve_volterra, py::arg("params"), py::arg("t_end"), py::arg("n_points"));
    m.def("analytic_unmodulated", &analytic_unmodulated, py::arg("params"), py::arg("t"));

    m.def(
        "density_matrix", [](const AmplitudeTrajectory& t, std::size_t k) { return density_matrix(t, k).rho; },
        py::arg("traj"), py::arg("k"));
    m.def("coherence_l1", &coherence_l1, py::arg("traj"), py::arg("k"));
    m.def("fidelity_to_initial", py::overload_cast<const AmplitudeTrajectory&, std::size_t>(&fidelity_to_initial),
          py::arg("traj"), py::arg("k"));

    m.def("sqw", &sqw, py::arg("traj"), py::arg("tau_index"));
    m.def("oqw", &oqw, py::arg("traj"), py::arg("tau_index"));
    m.def(
        "witness_curves",
        [](const ModelParams& p, double tau_max, std::size_t n, bool exact_segments) {
            WitnessOptions opt;
            opt.mode = exact_segments ? SegmentMode::ExactSegments : SegmentMode::TimeHomogeneous;
            const WitnessCurves w = witness_curves(p, tau_max, n, opt);
            py::dict d;
            d["taus"] = to_array(w.taus);
            d["sqw"] = to_array(w.sqw);
            d["oqw"] = to_array(w.oqw);
            d["coherence_half"] = to_array(w.coherence_half);
            return d;
        },
        py::arg("params"), py::arg("tau_max"), py::arg("n"), py::arg("exact_segments") = false);

    m.def("blp_nonmarkovianity", &blp_nonmarkovianity, py::arg("traj"), py::arg("tau_index"));
    m.def("qslt_ratio_excited", &qslt_ratio_excited, py::arg("traj"), py::arg("tau_index"));
    m.def(
        "qslt_ratio_general",
        [](const AmplitudeTrajectory& t, std::size_t k) {
            const QsltRatios r = qslt_ratio_general(t, k);
            return py::make_tuple(r.unified, r.op, r.tr, r.hs);
        },
        py::arg("traj"), py::arg("tau_index"));
    m.def("r_g", &r_g, py::arg("traj"), py::arg("tau_index"));
    m.def(
        "speed_series",
        [](const AmplitudeTrajectory& t, bool general_rg) {
            py::list out;
            for (const auto& s : speed_series(t, general_rg))
                out.append(metrics_dict(s));
            return out;
        },
        py::arg("traj"), py::arg("general_rg") = false);
    m.def(
        "sweep_gamma_lambda",
        [](const ModelParams& base, double tau, const std::vector<double>& axis, double eps, unsigned jobs) {
            SweepOptions opt;
            opt.eps = eps;
            opt.jobs = jobs;
            SweepResult r;
            {
                py::gil_scoped_release release;
                r = sweep_gamma_lambda(base, tau, axis, opt);
            }
            py::dict d;
            d["axis"] = to_array(r.axis);
            py::list metrics;
            for (const auto& s : r.metrics)
                metrics.append(metrics_dict(s));
            d["metrics"] = metrics;
            d["transition_speedup"] = r.transition_speedup ? py::cast(*r.transition_speedup) : py::none();
            d["transition_nonmarkov"] = r.transition_nonmarkov ? py::cast(*r.transition_nonmarkov) : py::none();
            return d;
        },
        py::arg("base"), py::arg("tau"), py::arg("axis"), py::arg("eps") = 1e-6, py::arg("jobs") = 1);
}
