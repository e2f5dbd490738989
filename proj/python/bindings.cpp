#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pcontact/cli.hpp"
#include "pcontact/continuation.hpp"
#include "pcontact/error.hpp"
#include "pcontact/perturbation.hpp"

namespace py = pybind11;
using namespace pcontact;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const ComplexArray& a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw Error(ErrorKind::DimensionMismatch, "expected a square 2-d array");
    const auto n = static_cast<std::size_t>(a.shape(0));
    return ComplexMatrix(n, std::vector<Complex>(a.data(), a.data() + n * n));
}

ComplexArray to_array(const ComplexMatrix& m) {
    const auto n = static_cast<py::ssize_t>(m.dim());
    ComplexArray out({n, n});
    std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
    return out;
}

HermitianMatrix to_potential(const py::object& obj) {
    const py::array q = py::array::ensure(obj);
    if (!q) throw Error(ErrorKind::InvalidArgument, "potential must be array-like");
    if (q.ndim() == 1) {
        const auto v = q.cast<std::vector<double>>();
        return HermitianMatrix::from_real_diagonal(v);
    }
    return HermitianMatrix(to_matrix(q.cast<ComplexArray>()));
}

py::tuple interval_tuple(const Interval& iv) { return py::make_tuple(iv.lo, iv.hi); }

Interval to_interval(const std::pair<double, double>& p) { return {p.first, p.second}; }

std::string_view kind_name(WeylKind k) {
    switch (k) {
        case WeylKind::point_interaction: return "point_interaction";
        case WeylKind::scalar_rational: return "scalar_rational";
        case WeylKind::tabulated: return "tabulated";
    }
    return "unknown";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Weak-coupling eigenvalue expansions for point-contact models";

    static py::handle error_type = py::exception<Error>(m, "Error", PyExc_RuntimeError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
            inst.attr("kind") = std::string(e.name());
            inst.attr("value") = e.value() ? py::cast(*e.value()) : py::none();
            PyErr_SetObject(error_type.ptr(), inst.ptr());
        }
    });

    m.def("det", [](const ComplexArray& a) { return det(to_matrix(a)); });
    m.def("adjugate", [](const ComplexArray& a) { return to_array(adjugate(to_matrix(a))); });
    m.def("inverse", [](const ComplexArray& a) { return to_array(inverse(to_matrix(a))); });
    m.def("hermitian_sqrt", [](const py::object& q, double shift) { return to_array(hermitian_sqrt(to_potential(q), shift)); },
          py::arg("q"), py::arg("shift"), "i*sqrt(shift - Q) for Hermitian Q.");

    py::class_<WeylModel>(m, "WeylModel")
        .def_property_readonly("dim", &WeylModel::dim)
        .def_property_readonly("kind", [](const WeylModel& w) { return std::string(kind_name(w.kind())); })
        .def_property_readonly("valid_interval", [](const WeylModel& w) { return interval_tuple(w.valid_interval()); })
        .def("eval", [](const WeylModel& w, double l) { return to_array(w.eval(l)); })
        .def("deriv1", [](const WeylModel& w, double l) { return to_array(w.deriv1(l)); })
        .def("deriv2", [](const WeylModel& w, double l) { return to_array(w.deriv2(l)); });

    m.def("point_interaction", [](const py::object& q) { return make_point_interaction(to_potential(q)); }, py::arg("q"),
          "M(lambda) = i sqrt(lambda - Q). `q` is a list of eigenvalues or a dense Hermitian matrix.");
    m.def(
        "scalar_rational",
        [](std::vector<double> num, std::vector<double> den, std::pair<double, double> iv) {
            return make_scalar_rational({std::move(num), std::move(den)}, to_interval(iv));
        },
        py::arg("numerator"), py::arg("denominator"), py::arg("interval"),
        "Scalar p(lambda)/q(lambda), coefficients in ascending powers.");

    py::class_<CoupledSystem>(m, "CoupledSystem")
        .def(py::init([](const WeylModel& tilde, const WeylModel& hat, double alpha, double beta, Complex omega) {
                 return CoupledSystem(tilde, hat, {alpha, beta, omega, tilde.dim()});
             }),
             py::arg("tilde"), py::arg("hat"), py::arg("alpha"), py::arg("beta"), py::arg("omega") = Complex(0.0))
        .def_property_readonly("dim", &CoupledSystem::dim)
        .def_property_readonly("alpha", [](const CoupledSystem& s) { return s.coupling().alpha; })
        .def_property_readonly("beta", [](const CoupledSystem& s) { return s.coupling().beta; })
        .def_property_readonly("omega", [](const CoupledSystem& s) { return s.coupling().omega; })
        .def_property_readonly("working_interval", [](const CoupledSystem& s) { return interval_tuple(s.working_interval()); })
        .def("with_omega", &CoupledSystem::with_omega)
        .def("swapped", &CoupledSystem::swapped)
        .def("t_matrix", [](const CoupledSystem& s, double l) { return to_array(t_matrix(s, l)); });

    m.def("char_fn", &char_fn, py::arg("sys"), py::arg("lam"), py::arg("x"));
    m.def("block_det", &block_det, py::arg("sys"), py::arg("lam"));

    m.def(
        "find_isolated_eigenvalue",
        [](const WeylModel& model, double beta, std::pair<double, double> bracket) {
            return find_isolated_eigenvalue(detfun(model, beta), to_interval(bracket));
        },
        py::arg("model"), py::arg("beta"), py::arg("bracket"));

    py::class_<ExpansionResult>(m, "Expansion")
        .def_readonly("lambda0", &ExpansionResult::lambda0)
        .def_readonly("a", &ExpansionResult::a)
        .def_readonly("b", &ExpansionResult::b)
        .def_readonly("order", &ExpansionResult::order)
        .def_property_readonly("dhat_beta_prime", [](const ExpansionResult& r) { return r.diagnostics.dhat_beta_prime; })
        .def_property_readonly("dtilde_alpha", [](const ExpansionResult& r) { return r.diagnostics.dtilde_alpha; })
        .def("__call__", &evaluate_expansion, py::arg("x"))
        .def("__repr__", [](const ExpansionResult& r) {
            std::ostringstream os;
            os.precision(17);
            os << "Expansion(lambda0=" << r.lambda0 << ", a=" << r.a;
            if (r.b) os << ", b=" << *r.b;
            os << ", order=" << r.order << ")";
            return os.str();
        });

    m.def("coeff_a", [](const CoupledSystem& s, double l0) { return coeff_a(s, l0); });
    m.def("coeff_ab_scalar", [](const CoupledSystem& s, double l0) { return coeff_ab_scalar(s, l0); });
    m.def("expansion", [](const CoupledSystem& s, double l0) { return expansion(s, l0); });
    m.def("evaluate_expansion", &evaluate_expansion, py::arg("res"), py::arg("x"));

    py::class_<BranchSample>(m, "BranchSample")
        .def_readonly("x", &BranchSample::x)
        .def_readonly("lam", &BranchSample::lambda)
        .def_readonly("residual", &BranchSample::residual)
        .def_readonly("newton_iters", &BranchSample::newton_iters);

    py::class_<FittedCoefficients>(m, "FittedCoefficients")
        .def_readonly("a_hat", &FittedCoefficients::a_hat)
        .def_readonly("b_hat", &FittedCoefficients::b_hat)
        .def_readonly("remainder_slope", &FittedCoefficients::remainder_slope);

    py::class_<BranchTrace>(m, "BranchTrace")
        .def_readonly("lambda0", &BranchTrace::lambda0)
        .def_readonly("samples", &BranchTrace::samples)
        .def_property_readonly("xs",
                               [](const BranchTrace& t) {
                                   std::vector<double> v;
                                   for (const auto& s : t.samples) v.push_back(s.x);
                                   return v;
                               })
        .def_property_readonly("lambdas", [](const BranchTrace& t) {
            std::vector<double> v;
            for (const auto& s : t.samples) v.push_back(s.lambda);
            return v;
        });

    m.def(
        "track_branch",
        [](const CoupledSystem& s, double l0, const std::vector<double>& xs, std::optional<double> seed_slope) {
            TrackOptions opts;
            opts.seed_slope = seed_slope;
            return track_branch(s, l0, xs, opts);
        },
        py::arg("sys"), py::arg("lambda0"), py::arg("xs"), py::arg("seed_slope") = py::none());
    m.def("fit_coefficients", &fit_coefficients, py::arg("trace"), py::arg("order"), py::arg("reference") = py::none());
    m.def("geometric_grid", &geometric_grid, py::arg("lo"), py::arg("hi"), py::arg("per_decade"));

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "pcontact");
            std::vector<const char*> argv;
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream out, err;
            const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command line tool in-process; returns (exit_code, stdout, stderr).");
}
