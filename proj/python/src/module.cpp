#include "fbplab/analysis.hpp"
#include "fbplab/errors.hpp"
#include "fbplab/kernel.hpp"
#include "fbplab/local_fbp.hpp"
#include "fbplab/nonlocal_fbp.hpp"
#include "fbplab/problem.hpp"
#include "fbplab/verify.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

namespace py = pybind11;
using namespace fbp;

namespace {

py::array_t<double> as_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

// Dense boundary samples as an (n, 3) array of (t, g, h).
py::array_t<double> boundary_array(const Trajectory& sol) {
    const auto b = sol.boundary();
    py::array_t<double> out({static_cast<py::ssize_t>(b.size()), py::ssize_t{3}});
    auto r = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < b.size(); ++i) {
        r(i, 0) = b[i].t;
        r(i, 1) = b[i].g;
        r(i, 2) = b[i].h;
    }
    return out;
}

py::list profile_list(const Trajectory& sol) {
    py::list out;
    for (const Profile& p : sol.profiles()) out.append(p);
    return out;
}

ProblemConfig config_from_string(const std::string& text) { return problem_from_json(nlohmann::json::parse(text)); }

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Local and nonlocal free boundary solvers";

    static py::exception<Error> error_type(m, "FbpError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::handle(error_type)(e.what());
            exc.attr("code") = std::string(to_string(e.code()));
            exc.attr("time_of_failure") = e.time_of_failure() ? py::cast(*e.time_of_failure()) : py::none();
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    py::class_<Kernel>(m, "Kernel")
        .def_static("epanechnikov", &Kernel::epanechnikov, py::arg("quadrature_panels") = Kernel::default_panels)
        .def_static("triangle", &Kernel::triangle, py::arg("quadrature_panels") = Kernel::default_panels)
        .def_static("quartic", &Kernel::quartic, py::arg("quadrature_panels") = Kernel::default_panels)
        .def_static("from_table", &Kernel::from_table, py::arg("z"), py::arg("values"),
                    py::arg("quadrature_panels") = Kernel::default_panels)
        .def_static("by_name", &Kernel::by_name, py::arg("name_or_path"))
        .def_property_readonly("name", &Kernel::name)
        .def_property_readonly("renormalization_factor", &Kernel::renormalization_factor)
        .def("__call__", &Kernel::eval, py::arg("z"))
        .def("moment", &Kernel::moment, py::arg("k"))
        .def("c_star", &Kernel::c_star)
        .def("c_zero", &Kernel::c_zero)
        .def("scaled_eval", &Kernel::scaled_eval, py::arg("eps"), py::arg("x"))
        .def("boundary_weight", &Kernel::boundary_weight, py::arg("w"));

    py::class_<ProblemConfig>(m, "ProblemConfig")
        .def(py::init<>())
        .def_static("from_json", &config_from_string, py::arg("text"))
        .def_static("load", [](const std::string& path) { return load_problem(path); }, py::arg("path"))
        .def("to_json", [](const ProblemConfig& c) { return problem_to_json(c).dump(); })
        .def_readwrite("d", &ProblemConfig::d)
        .def_readwrite("mu", &ProblemConfig::mu)
        .def_readwrite("h0", &ProblemConfig::h0)
        .def_readwrite("T", &ProblemConfig::T);

    py::class_<Violation>(m, "Violation")
        .def_readonly("hypothesis", &Violation::hypothesis)
        .def_readonly("message", &Violation::message)
        .def("__repr__", [](const Violation& v) { return "<Violation " + v.hypothesis + ": " + v.message + ">"; });

    py::class_<ValidatedConfig>(m, "ValidatedConfig")
        .def_property_readonly("config", &ValidatedConfig::config)
        .def_property_readonly("K", &ValidatedConfig::K)
        .def_property_readonly("L0", &ValidatedConfig::L0)
        .def_property_readonly("sup_v0", &ValidatedConfig::sup_v0);

    m.def("violations", [](const ProblemConfig& c) { return validate(c).violations; }, py::arg("config"),
          "Failed hypotheses; empty when the config is admissible.");
    m.def("validate", &validate_or_throw, py::arg("config"), "Validated config; raises FbpError otherwise.");

    py::class_<PerturbationKnobs>(m, "PerturbationKnobs")
        .def(py::init([](double A, double B, double gamma1, double eps) { return PerturbationKnobs{A, B, gamma1, eps}; }),
             py::arg("A") = 0.0, py::arg("B") = 0.0, py::arg("gamma1") = 0.4, py::arg("eps") = 0.0)
        .def_static("upper", &PerturbationKnobs::upper, py::arg("eps"), py::arg("gamma1"))
        .def_static("lower", &PerturbationKnobs::lower, py::arg("eps"), py::arg("gamma1"))
        .def_readwrite("A", &PerturbationKnobs::A)
        .def_readwrite("B", &PerturbationKnobs::B)
        .def_readwrite("gamma1", &PerturbationKnobs::gamma1)
        .def_readwrite("eps", &PerturbationKnobs::eps);

    py::class_<NonlocalVariant>(m, "NonlocalVariant")
        .def_static("modified", &NonlocalVariant::modified, py::arg("beta") = 0.5)
        .def_static("unmodified", &NonlocalVariant::unmodified, py::arg("c1"))
        .def("__repr__", &NonlocalVariant::describe);

    py::class_<Profile>(m, "Profile")
        .def_readonly("t", &Profile::t)
        .def_readonly("g", &Profile::g)
        .def_readonly("h", &Profile::h)
        .def_readonly("reaction_integral", &Profile::reaction_integral)
        .def_property_readonly("x", [](const Profile& p) { return as_array(p.x); })
        .def_property_readonly("v", [](const Profile& p) { return as_array(p.v); })
        .def("mass", &Profile::mass)
        .def("sample", &Profile::sample, py::arg("x"));

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly("horizon", &Trajectory::horizon)
        .def_property_readonly("boundary", &boundary_array, "(n, 3) array of t, g, h")
        .def_property_readonly("profiles", &profile_list)
        .def("boundary_at", &Trajectory::boundary_at, py::arg("t"))
        .def("sample", &Trajectory::sample, py::arg("t"), py::arg("x"))
        .def("extent", &Trajectory::extent);
    py::class_<LocalSolution, Trajectory>(m, "LocalSolution")
        .def_property_readonly("N", [](const LocalSolution& s) { return s.resolution().N; })
        .def_property_readonly("dt", [](const LocalSolution& s) { return s.resolution().dt; });
    py::class_<NonlocalSolution, Trajectory>(m, "NonlocalSolution")
        .def_property_readonly("eps", [](const NonlocalSolution& s) { return s.resolution().eps; })
        .def_property_readonly("dx", [](const NonlocalSolution& s) { return s.resolution().dx; })
        .def_property_readonly("dt", [](const NonlocalSolution& s) { return s.resolution().dt; });

    m.def(
        "solve_local",
        [](const ValidatedConfig& c, int N, double dt, const PerturbationKnobs& knobs, int intervals) {
            py::gil_scoped_release release;
            return solve_local(c, knobs, N, dt, OutputSchedule{intervals});
        },
        py::arg("config"), py::arg("N") = 512, py::arg("dt") = 1e-4, py::arg("knobs") = PerturbationKnobs::inert(),
        py::arg("intervals") = 64);
    m.def(
        "solve_nonlocal",
        [](const ValidatedConfig& c, double eps, const Kernel& k, const NonlocalVariant& variant, double dx, double dt,
           int intervals) {
            py::gil_scoped_release release;
            return solve_nonlocal(c, k, eps, variant, dx > 0.0 ? dx : eps / 8, dt, OutputSchedule{intervals});
        },
        py::arg("config"), py::arg("eps"), py::arg("kernel") = Kernel::epanechnikov(),
        py::arg("variant") = NonlocalVariant::modified(0.5), py::arg("dx") = 0.0, py::arg("dt") = 0.0,
        py::arg("intervals") = 64);

    py::class_<ErrorReport>(m, "ErrorReport")
        .def_readonly("per_time_sup", &ErrorReport::per_time_sup)
        .def_readonly("overall_sup", &ErrorReport::overall_sup)
        .def_readonly("boundary_sup", &ErrorReport::boundary_sup);
    m.def("sup_error", &sup_error, py::arg("a"), py::arg("b"), py::arg("time_samples") = 64,
          py::arg("space_samples") = 1024);

    py::class_<RateFit>(m, "RateFit")
        .def_readonly("pairs", &RateFit::pairs)
        .def_readonly("gamma_hat", &RateFit::gamma_hat)
        .def_readonly("r_squared", &RateFit::r_squared);
    m.def("fit_rate", &fit_rate, py::arg("pairs"));

    m.def("mass_residual", &mass_residual, py::arg("solution"), py::arg("config"), py::arg("coefficient"));

    py::class_<SandwichReport>(m, "SandwichReport")
        .def_readonly("ok", &SandwichReport::ok)
        .def_readonly("max_violation", &SandwichReport::max_violation)
        .def_readonly("violations", &SandwichReport::violations)
        .def_readonly("where", &SandwichReport::where);
    m.def(
        "sandwich_check",
        [](const Trajectory& lo, const Trajectory& mid, const Trajectory& up, double value_tol, double domain_tol) {
            return sandwich_check(lo, mid, up, SandwichTolerance{value_tol, domain_tol});
        },
        py::arg("lower"), py::arg("mid"), py::arg("upper"), py::arg("value_tol") = 0.0, py::arg("domain_tol") = 0.0);
    m.def("symmetry_defect", &symmetry_defect, py::arg("solution"), py::arg("time_samples") = 64,
          py::arg("space_samples") = 1024);

    py::class_<verify::CheckResult>(m, "CheckResult")
        .def_readonly("suite", &verify::CheckResult::suite)
        .def_readonly("name", &verify::CheckResult::name)
        .def_readonly("passed", &verify::CheckResult::passed)
        .def_readonly("value", &verify::CheckResult::value)
        .def_readonly("threshold", &verify::CheckResult::threshold)
        .def_readonly("detail", &verify::CheckResult::detail);
    m.def(
        "verify", [](const std::string& suite) { return verify::run_suite(verify::parse_suite(suite)); },
        py::arg("suite") = "all");
}
