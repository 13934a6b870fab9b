#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ptyopt/fourier.hpp"
#include "ptyopt/harness.hpp"
#include "ptyopt/objective.hpp"
#include "ptyopt/problem_io.hpp"
#include "ptyopt/solvers.hpp"
#include "ptyopt/verify.hpp"

namespace py = pybind11;
using namespace ptyopt;

namespace {

using CArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

ComplexVector to_vector(const CArray& a) {
    if (a.ndim() != 1) throw py::value_error("expected a 1-D complex array");
    if (a.size() == 0) throw py::value_error("expected a nonempty array");
    return ComplexVector(std::vector<Complex>(a.data(), a.data() + a.size()));
}

CArray to_array(const ComplexVector& v) {
    CArray out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<double> measurements_array(const MeasurementSet& m) {
    py::array_t<double> out({static_cast<py::ssize_t>(m.regions()), static_cast<py::ssize_t>(m.dimension())});
    std::copy(m.values().begin(), m.values().end(), out.mutable_data());
    return out;
}

ShiftSet make_shifts(std::size_t d, const std::optional<std::vector<long>>& offsets, const std::string& mode) {
    if (!offsets) return ShiftSet(ShiftSet::all_circular(d).offsets(), shift_mode_from_string(mode), d);
    return ShiftSet(*offsets, shift_mode_from_string(mode), d);
}

py::dict trace_dict(const std::vector<TraceRecord>& trace) {
    const auto n = static_cast<py::ssize_t>(trace.size());
    py::array_t<std::int64_t> t(n), wall(n);
    py::array_t<double> J(n), L(n), gz(n), gv(n), mu(n), nu(n);
    for (py::ssize_t i = 0; i < n; ++i) {
        const auto& r = trace[static_cast<std::size_t>(i)];
        t.mutable_at(i) = static_cast<std::int64_t>(r.t);
        J.mutable_at(i) = r.J;
        L.mutable_at(i) = r.L_eps;
        gz.mutable_at(i) = r.grad_z_norm;
        gv.mutable_at(i) = r.grad_v_norm;
        mu.mutable_at(i) = r.mu_t;
        nu.mutable_at(i) = r.nu_t;
        wall.mutable_at(i) = r.wall_ns;
    }
    py::dict out;
    out["t"] = t;
    out["J"] = J;
    out["L_eps"] = L;
    out["grad_z_norm"] = gz;
    out["grad_v_norm"] = gv;
    out["mu_t"] = mu;
    out["nu_t"] = nu;
    out["wall_ns"] = wall;
    return out;
}

std::vector<TraceRecord> trace_from_dict(const py::dict& d) {
    auto col = [&](const char* key) { return d[key].cast<std::vector<double>>(); };
    const auto t = d["t"].cast<std::vector<std::size_t>>();
    const auto gz = col("grad_z_norm"), gv = col("grad_v_norm");
    std::vector<TraceRecord> out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        out[i].t = t[i];
        out[i].grad_z_norm = gz.at(i);
        out[i].grad_v_norm = gv.at(i);
    }
    return out;
}

py::dict report_dict(const CheckReport& r) {
    py::dict out;
    out["name"] = r.name;
    out["samples"] = r.samples;
    out["worst_slack"] = r.worst_slack;
    out["tolerance"] = r.tolerance;
    out["passed"] = r.passed;
    out["detail"] = r.detail;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Blind ptychography objective, solvers and checkers";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("dft", [](const CArray& x) { return to_array(dft(to_vector(x))); });
    m.def("idft", [](const CArray& x) { return to_array(idft(to_vector(x))); });
    m.def(
        "shift",
        [](const CArray& v, long r, const std::string& mode) {
            return to_array(shift(to_vector(v), r, shift_mode_from_string(mode)));
        },
        py::arg("v"), py::arg("r"), py::arg("mode") = "circular");
    m.def(
        "forward_intensities",
        [](const CArray& x, const CArray& w, std::optional<std::vector<long>> offsets, const std::string& mode) {
            const ComplexVector xv = to_vector(x);
            return measurements_array(forward_intensities(xv, to_vector(w), make_shifts(xv.size(), offsets, mode)));
        },
        py::arg("x"), py::arg("w"), py::arg("offsets") = py::none(), py::arg("mode") = "circular");

    py::class_<ProblemInstance>(m, "Problem")
        .def_static(
            "synthesize",
            [](std::size_t d, std::uint64_t seed, std::optional<std::vector<long>> offsets, const std::string& mode,
               const std::string& noise, double sigma, double epsilon, double alpha_T, double beta_T,
               std::vector<double> p, std::size_t K) {
                ProblemParams params;
                params.d = d;
                params.seed = seed;
                params.shifts = make_shifts(d, offsets, mode);
                if (noise == "poisson") params.noise = NoiseModel::poisson();
                else if (noise == "gaussian") params.noise = NoiseModel::gaussian(sigma);
                else if (noise != "none") throw py::value_error("noise must be none, poisson or gaussian");
                params.epsilon = epsilon;
                params.alpha_T = alpha_T;
                params.beta_T = beta_T;
                params.p = std::move(p);
                params.K = K;
                return synthesize_problem(params);
            },
            py::arg("d") = 16, py::arg("seed") = 0, py::arg("offsets") = py::none(), py::arg("mode") = "circular",
            py::arg("noise") = "none", py::arg("sigma") = 0.0, py::arg("epsilon") = 1e-8, py::arg("alpha_T") = 1e-3,
            py::arg("beta_T") = 1e-3, py::arg("p") = std::vector<double>{}, py::arg("K") = 1)
        .def_static("load", [](const std::string& path) { return load_problem(path); })
        .def_static("from_json", [](const std::string& text) { return problem_from_json(nlohmann::json::parse(text)); })
        .def("save", [](const ProblemInstance& p, const std::string& path) { save_problem(p, path); })
        .def("to_json", [](const ProblemInstance& p) { return dump_json(problem_to_json(p)); })
        .def_property_readonly("d", &ProblemInstance::dimension)
        .def_property_readonly("regions", &ProblemInstance::regions)
        .def_property_readonly("offsets", [](const ProblemInstance& p) { return p.shifts().offsets(); })
        .def_property_readonly("mode", [](const ProblemInstance& p) { return to_string(p.shifts().mode()); })
        .def_property_readonly("y", [](const ProblemInstance& p) { return measurements_array(p.measurements); })
        .def_property_readonly("x", [](const ProblemInstance& p) -> py::object {
            if (!p.ground_truth) return py::none();
            return to_array(p.ground_truth->object);
        })
        .def_property_readonly("w", [](const ProblemInstance& p) -> py::object {
            if (!p.ground_truth) return py::none();
            return to_array(p.ground_truth->window);
        })
        .def_readwrite("epsilon", &ProblemInstance::epsilon)
        .def_readwrite("alpha_T", &ProblemInstance::alpha_T)
        .def_readwrite("beta_T", &ProblemInstance::beta_T)
        .def_readwrite("p", &ProblemInstance::p)
        .def_readwrite("K", &ProblemInstance::K);

    m.def("loss", [](const ProblemInstance& p, const CArray& z, const CArray& v) {
        const LossValue l = loss(p, to_vector(z), to_vector(v));
        return py::make_tuple(l.J, l.L_eps);
    });
    m.def("loss_region", [](const ProblemInstance& p, const CArray& z, const CArray& v, std::size_t region) {
        return loss_region(p, to_vector(z), to_vector(v), region);
    });
    m.def("gradient", [](const ProblemInstance& p, const CArray& z, const CArray& v) {
        const GradientPair g = gradient(p, to_vector(z), to_vector(v));
        return py::make_tuple(to_array(g.g_z), to_array(g.g_v));
    });
    m.def("gradient_region", [](const ProblemInstance& p, const CArray& z, const CArray& v, std::size_t region) {
        const GradientPair g = gradient_region(p, to_vector(z), to_vector(v), region);
        return py::make_tuple(to_array(g.g_z), to_array(g.g_v));
    });
    m.def(
        "fd_gradient",
        [](const ProblemInstance& p, const CArray& z, const CArray& v, std::optional<double> h) {
            const ComplexVector zz = to_vector(z), vv = to_vector(v);
            const GradientPair g = fd_wirtinger_gradient(p, zz, vv, h ? *h : default_fd_step(zz, vv));
            return py::make_tuple(to_array(g.g_z), to_array(g.g_v));
        },
        py::arg("problem"), py::arg("z"), py::arg("v"), py::arg("h") = py::none());
    m.def("bounds", [](const ProblemInstance& p, const CArray& z, const CArray& v) {
        const BoundSet b = bounds(p, to_vector(z), to_vector(v));
        py::dict out;
        out["B"] = b.B;
        out["B_z"] = b.B_z;
        out["B_v"] = b.B_v;
        out["L_v"] = b.L_v;
        out["L_z"] = b.L_z;
        return out;
    });

    m.def(
        "run",
        [](const ProblemInstance& p, const CArray& z0, const CArray& v0, const std::string& algo,
           std::size_t max_iters, std::uint64_t seed, py::dict options) {
            nlohmann::json doc = {{"algo", algo}, {"max_iters", max_iters}, {"seed", seed}};
            for (auto item : options) {
                const auto key = item.first.cast<std::string>();
                if (py::isinstance<py::str>(item.second)) doc[key] = item.second.cast<std::string>();
                else if (py::isinstance<py::bool_>(item.second)) doc[key] = item.second.cast<bool>();
                else if (py::isinstance<py::int_>(item.second)) doc[key] = item.second.cast<std::int64_t>();
                else doc[key] = item.second.cast<double>();
            }
            const SolverConfig config = solver_config_from_json(doc);
            const ComplexVector z = to_vector(z0), v = to_vector(v0);
            std::optional<SolverResult> result;
            {
                py::gil_scoped_release release;
                result.emplace(run_solver(p, z, v, config));
            }
            const SolverResult& r = *result;
            py::dict out;
            out["z"] = to_array(r.final.z);
            out["v"] = to_array(r.final.v);
            out["trace"] = trace_dict(r.trace);
            out["iterations"] = r.iterations;
            out["converged"] = r.converged;
            out["regions"] = r.regions;
            return out;
        },
        py::arg("problem"), py::arg("z0"), py::arg("v0"), py::arg("algo") = "gd", py::arg("max_iters") = 1000,
        py::arg("seed") = 0, py::arg("options") = py::dict());

    m.def(
        "initial_guess",
        [](const ProblemInstance& p, std::uint64_t seed, const std::string& mode) {
            const IteratePair start = initial_guess(p, mode == "truth" ? InitMode::truth : InitMode::random, seed);
            return py::make_tuple(to_array(start.z), to_array(start.v));
        },
        py::arg("problem"), py::arg("seed") = 0, py::arg("mode") = "random");

    m.def("verify", [](const std::string& suite, const ProblemInstance& p, std::uint64_t seed) {
        py::list out;
        for (const auto& r : run_suite(suite, p, seed)) out.append(report_dict(r));
        return out;
    }, py::arg("suite"), py::arg("problem"), py::arg("seed") = 0);

    m.def("reconstruction_error", [](const CArray& z, const CArray& v, const CArray& x, const CArray& w) {
        return reconstruction_error(to_vector(z), to_vector(v), to_vector(x), to_vector(w));
    });
    m.def(
        "fit_decay_slope",
        [](const py::dict& trace, std::size_t t_min) {
            const DecayFit fit = fit_decay_slope(trace_from_dict(trace), t_min);
            return py::make_tuple(fit.slope, fit.degenerate);
        },
        py::arg("trace"), py::arg("t_min") = 0);
}
