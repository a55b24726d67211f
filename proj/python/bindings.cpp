#include "reludist/cli.hpp"
#include "reludist/errors.hpp"
#include "reludist/estimators.hpp"
#include "reludist/experiments.hpp"
#include "reludist/geometry.hpp"
#include "reludist/random_layer.hpp"
#include "reludist/report.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace reludist;

namespace {

claim parse_claim(const std::string &name) {
    if (name == "corrected") {
        return claim::corrected;
    }
    if (name == "original") {
        return claim::original;
    }
    throw py::value_error("claim must be 'corrected' or 'original'");
}

py::dict record_dict(const row &r) {
    py::dict d;
    for (const auto &[key, value] : r.items()) {
        if (value.is_null()) {
            d[py::str(key)] = py::none();
        } else if (value.is_number_float()) {
            d[py::str(key)] = value.get<double>();
        } else if (value.is_number_unsigned()) {
            d[py::str(key)] = value.get<std::uint64_t>();
        } else if (value.is_number_integer()) {
            d[py::str(key)] = value.get<std::int64_t>();
        } else if (value.is_boolean()) {
            d[py::str(key)] = value.get<bool>();
        } else {
            d[py::str(key)] = value.get<std::string>();
        }
    }
    return d;
}

py::list sweep_dicts(const std::vector<sweep_record> &records) {
    py::list out;
    for (const auto &r : records) {
        out.append(record_dict(to_row(r)));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Distance and angle distortion of random Gaussian ReLU layers.";

    // ================================================
    // errors
    // ================================================
    static py::exception<error> base_error(m, "ReludistError");
    py::register_exception<zero_vector_error>(m, "ZeroVectorError", base_error.ptr());
    py::register_exception<dimension_mismatch_error>(m, "DimensionMismatchError", base_error.ptr());
    py::register_exception<domain_error>(m, "DomainError", base_error.ptr());
    py::register_exception<invalid_argument_error>(m, "InvalidArgumentError", base_error.ptr());
    py::register_exception<size_overflow_error>(m, "SizeOverflowError", base_error.ptr());
    py::register_exception<all_trials_degenerate_error>(m, "AllTrialsDegenerateError", base_error.ptr());
    py::register_exception<hypotheses_too_close_error>(m, "HypothesesTooCloseError", base_error.ptr());
    py::register_exception<too_few_points_error>(m, "TooFewPointsError", base_error.ptr());
    py::register_exception<infeasible_geometry_error>(m, "InfeasibleGeometryError", base_error.ptr());

    // ================================================
    // closed forms
    // ================================================
    py::class_<pair_geometry>(m, "PairGeometry")
        .def_readonly("norm_x", &pair_geometry::norm_x)
        .def_readonly("norm_y", &pair_geometry::norm_y)
        .def_readonly("cos_theta", &pair_geometry::cos_theta)
        .def_readonly("theta", &pair_geometry::theta)
        .def_readonly("psi", &pair_geometry::psi)
        .def_readonly("sq_dist", &pair_geometry::sq_dist);

    m.def(
        "angle_between", [](const real_vector &x, const real_vector &y) { return angle_between(x, y); }, py::arg("x"),
        py::arg("y"));
    m.def("geometry_from_angle", &geometry_from_angle, py::arg("theta"), py::arg("norm_x") = 1.0, py::arg("norm_y") = 1.0);
    m.def("psi_of_angle", &psi_of_angle, py::arg("theta"));
    m.def(
        "expected_sq_dist",
        [](const pair_geometry &g, const std::string &variant) { return expected_sq_dist(g, parse_claim(variant)).value; },
        py::arg("geometry"), py::arg("claim") = "corrected");
    m.def("cross_term_closed_form", &cross_term_closed_form, py::arg("theta"), py::arg("norm_x") = 1.0,
          py::arg("norm_y") = 1.0, py::arg("m") = 1);
    m.def("expected_output_cos", &expected_output_cos, py::arg("theta"));
    m.def(
        "shrinkage_bounds",
        [](const pair_geometry &g) {
            const envelope e = shrinkage_bounds(g);
            return py::make_tuple(e.lower, e.upper);
        },
        py::arg("geometry"));
    m.def("unit_shrinkage_ratio", &unit_shrinkage_ratio, py::arg("theta"));

    // ================================================
    // random layers
    // ================================================
    py::class_<gaussian_layer>(m, "GaussianLayer")
        .def_property_readonly("rows", &gaussian_layer::rows)
        .def_property_readonly("cols", &gaussian_layer::cols)
        .def_property_readonly("seed", &gaussian_layer::seed)
        .def("to_numpy", [](const gaussian_layer &layer) {
            py::array_t<double> a({ layer.rows(), layer.cols() });
            auto view = layer.entries();
            std::copy(view.begin(), view.end(), a.mutable_data());
            return a;
        });
    m.def("sample_layer", &sample_layer, py::arg("n"), py::arg("m"), py::arg("seed"),
          py::arg("element_cap") = default_element_cap);
    m.def(
        "relu_forward", [](const gaussian_layer &layer, const real_vector &x) { return relu_forward(layer, x); },
        py::arg("layer"), py::arg("x"));
    m.def(
        "sq_dist_realization",
        [](const gaussian_layer &layer, const real_vector &x, const real_vector &y) {
            return sq_dist_realization(layer, x, y);
        },
        py::arg("layer"), py::arg("x"), py::arg("y"));

    // ================================================
    // estimators
    // ================================================
    py::class_<moment_estimate>(m, "MomentEstimate")
        .def_readonly("mean", &moment_estimate::mean)
        .def_readonly("stderr", &moment_estimate::std_error)
        .def_readonly("trials", &moment_estimate::trials)
        .def_readonly("master_seed", &moment_estimate::master_seed)
        .def("__repr__", [](const moment_estimate &e) {
            std::ostringstream s;
            s << "MomentEstimate(mean=" << e.mean << ", stderr=" << e.std_error << ", trials=" << e.trials << ")";
            return s.str();
        });

    m.def(
        "mc_sq_dist",
        [](const real_vector &x, const real_vector &y, std::size_t m_rows, std::size_t trials, std::uint64_t seed,
           unsigned workers) {
            py::gil_scoped_release release;
            return mc_sq_dist(x, y, m_rows, trials, seed, { workers });
        },
        py::arg("x"), py::arg("y"), py::arg("m"), py::arg("trials"), py::arg("seed") = 0, py::arg("workers") = 0);
    m.def(
        "mc_output_cos",
        [](const real_vector &x, const real_vector &y, std::size_t m_rows, std::size_t trials, std::uint64_t seed,
           unsigned workers) {
            output_cos_estimate est;
            {
                py::gil_scoped_release release;
                est = mc_output_cos(x, y, m_rows, trials, seed, { workers });
            }
            return py::make_tuple(est.estimate, est.degenerate_trials);
        },
        py::arg("x"), py::arg("y"), py::arg("m"), py::arg("trials"), py::arg("seed") = 0, py::arg("workers") = 0);
    m.def("cross_term_mc_2d", &cross_term_mc_2d, py::arg("theta"), py::arg("trials"), py::arg("seed") = 0);
    m.def("quadrature_cross_integral", &quadrature_cross_integral, py::arg("theta"),
          py::arg("panels") = default_simpson_panels);
    m.def(
        "refutation_test",
        [](const real_vector &x, const real_vector &y, std::size_t m_rows, std::size_t trials, std::uint64_t seed,
           double z_accept, double z_reject) {
            const zscore_verdict v = refutation_test(x, y, m_rows, trials, seed, { z_accept, z_reject });
            py::dict d;
            d["verdict"] = std::string(to_string(v.outcome));
            d["z_corrected"] = v.z_corrected;
            d["z_original"] = v.z_original;
            d["mean"] = v.estimate.mean;
            d["stderr"] = v.estimate.std_error;
            d["corrected"] = v.corrected;
            d["original"] = v.original;
            return d;
        },
        py::arg("x"), py::arg("y"), py::arg("m"), py::arg("trials"), py::arg("seed") = 0, py::arg("z_accept") = 4.0,
        py::arg("z_reject") = 10.0);
    m.def("mean_width_estimate", &mean_width_estimate, py::arg("points"), py::arg("g_samples"), py::arg("seed") = 0);

    // ================================================
    // experiments
    // ================================================
    m.def(
        "theta_sweep",
        [](const std::vector<double> &grid, std::size_t m_rows, std::size_t trials, std::uint64_t seed, std::size_t n) {
            return sweep_dicts(theta_sweep(grid, m_rows, trials, seed, n));
        },
        py::arg("theta_grid"), py::arg("m"), py::arg("trials"), py::arg("seed") = 0, py::arg("n") = 64);
    m.def(
        "concentration_sweep",
        [](const std::vector<std::size_t> &m_list, double theta, std::size_t trials, std::uint64_t seed, std::size_t n) {
            const auto records = concentration_sweep(m_list, theta, trials, seed, n);
            return py::make_tuple(sweep_dicts(records), loglog_slope(records));
        },
        py::arg("m_list"), py::arg("theta"), py::arg("trials"), py::arg("seed") = 0, py::arg("n") = 64);
    m.def(
        "depth_sweep",
        [](double theta, const std::vector<std::size_t> &widths, std::size_t layers_max, std::size_t trials,
           std::uint64_t seed, std::size_t n) { return sweep_dicts(depth_sweep(theta, widths, layers_max, trials, seed, n)); },
        py::arg("theta"), py::arg("widths"), py::arg("layers_max"), py::arg("trials"), py::arg("seed") = 0, py::arg("n") = 64);
    m.def(
        "separation_experiment",
        [](std::size_t n, std::size_t classes, std::size_t points_per_class, double intra_max, double inter_min,
           std::size_t m_rows, std::size_t layers, std::size_t trials, std::uint64_t seed) {
            const class_config config{ n, classes, points_per_class, intra_max, inter_min, seed };
            return record_dict(to_row(separation_experiment(config, m_rows, layers, trials, seed)));
        },
        py::arg("n"), py::arg("classes"), py::arg("points_per_class"), py::arg("intra_max"), py::arg("inter_min"),
        py::arg("m"), py::arg("layers"), py::arg("trials"), py::arg("seed") = 0);

    // ================================================
    // command line
    // ================================================
    m.def(
        "run_cli",
        [](const std::vector<std::string> &args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the reludist command line in-process; returns (exit_code, stdout, stderr).");
}
