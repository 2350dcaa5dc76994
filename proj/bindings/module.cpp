#include "elastica/driver.hpp"
#include "elastica/energy.hpp"
#include "elastica/geometry.hpp"
#include "elastica/optimize.hpp"
#include "elastica/sampling.hpp"
#include "elastica/scatter.hpp"
#include "elastica/shapes.hpp"
#include "elastica/version.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace elastica;

namespace {

std::vector<std::array<double, 2>> polygon_list(const ShapePoint& m) {
    std::vector<std::array<double, 2>> out;
    for (const auto& v : reconstruct_polygon(m)) out.push_back({v.x(), v.y()});
    return out;
}

std::vector<std::vector<Complex>> farfield_rows(const FarField& f) {
    std::vector<std::vector<Complex>> rows(f.values.rows());
    for (Eigen::Index r = 0; r < f.values.rows(); ++r) {
        rows[r].resize(f.values.cols());
        for (Eigen::Index c = 0; c < f.values.cols(); ++c) rows[r][c] = f.values(r, c);
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Boundary reconstruction for 2D sound-soft scatterers";
    m.attr("__version__") = kVersion;

    py::class_<ShapePoint>(m, "ShapePoint")
        .def_property_readonly("n", &ShapePoint::size)
        .def_property_readonly("theta",
                               [](const ShapePoint& s) {
                                   return std::vector<double>(s.theta.begin(), s.theta.end());
                               })
        .def_readonly("length", &ShapePoint::length)
        .def_property_readonly("base",
                               [](const ShapePoint& s) {
                                   return std::array<double, 2>{s.base.x(), s.base.y()};
                               })
        .def("__repr__", [](const ShapePoint& s) {
            return "<ShapePoint n=" + std::to_string(s.size()) + ">";
        });

    m.def("shape", &shape_library, py::arg("name"), py::arg("params"), py::arg("n"),
          "Ground-truth shape from the builtin library (circle, ellipse, kite, three_lobe, "
          "peanut, s_shape, horseshoe)");
    m.def("shape_names", &shape_library_names);
    m.def("polygon", &polygon_list, py::arg("shape"),
          "Vertices of the reconstructed polygon, n+1 pairs");
    m.def(
        "closure_defect",
        [](const ShapePoint& s) {
            const Vec2 d = closure_defect(s);
            return std::array<double, 2>{d.x(), d.y()};
        },
        py::arg("shape"));
    m.def(
        "bending_energy",
        [](const ShapePoint& s) { return bending_energy(s).value; }, py::arg("shape"),
        "Scale-invariant discrete bending energy (4*pi^2 for the round circle)");
    m.def(
        "mobius_energy",
        [](const ShapePoint& s) { return mobius_energy(reconstruct_polygon(s)); },
        py::arg("shape"));
    m.def(
        "is_simple", [](const ShapePoint& s) { return is_simple(reconstruct_polygon(s)); },
        py::arg("shape"));
    m.def("turning_number", &discrete_turning_number, py::arg("shape"));
    m.def(
        "restore_feasibility",
        [](const ShapePoint& s, double tol, int max_iter) {
            return restore_feasibility(s, tol, max_iter);
        },
        py::arg("shape"), py::arg("tol") = 1e-10, py::arg("max_iter") = 20);

    m.def(
        "far_field",
        [](const ShapePoint& s, double k, int n_incident, int n_measurement, int nystrom) {
            return farfield_rows(
                far_field_map(s, ScatterConfig::equidistant(k, n_incident, n_measurement,
                                                            nystrom)));
        },
        py::arg("shape"), py::arg("k"), py::arg("n_incident") = 20,
        py::arg("n_measurement") = 40, py::arg("nystrom_points") = 128,
        "Far-field samples, rows = measurement directions, cols = incident directions",
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "add_noise",
        [](const std::vector<std::vector<Complex>>& rows, double level, std::uint64_t seed,
           int n_measurement, int n_incident) {
            FarField f;
            f.values.resize(rows.size(), rows.empty() ? 0 : rows[0].size());
            for (size_t r = 0; r < rows.size(); ++r)
                for (size_t c = 0; c < rows[r].size(); ++c)
                    f.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                        rows[r][c];
            const double w = (2.0 * 3.141592653589793 / n_measurement) *
                             (2.0 * 3.141592653589793 / n_incident);
            auto [noisy, delta] = add_noise(f.stacked(), w, level, seed);
            return std::make_pair(
                farfield_rows(FarField::from_stacked(noisy, f.values.rows(), f.values.cols())),
                delta);
        },
        py::arg("far_field"), py::arg("relative_level"), py::arg("seed"),
        py::arg("n_measurement"), py::arg("n_incident"),
        "Seeded Gaussian noise with the relative data-norm level enforced exactly");
}
