// Python bindings for the main operations: mesh loading, distances, the
// bound calculus, geodesic search, and the contraction pipeline summary.
// Reports cross the boundary as plain dicts/lists so the Python side stays
// dependency-free.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "loopgeo/bounds.hpp"
#include "loopgeo/cover.hpp"
#include "loopgeo/fixtures.hpp"
#include "loopgeo/homotopy.hpp"
#include "loopgeo/report.hpp"
#include "loopgeo/surface.hpp"
#include "loopgeo/sweep.hpp"

namespace py = pybind11;
using namespace loopgeo;

namespace {

py::dict logscalar_dict(const LogScalar& x) {
    py::dict d;
    d["level"] = x.level();
    d["lo"] = x.lo();
    d["hi"] = x.hi();
    d["value"] = x.to_double();
    d["repr"] = x.str();
    return d;
}

SurfacePoint resolve(const Surface& s, int vertex, double dist) {
    SurfacePoint p = s.vertex_point(vertex);
    if (dist <= 0) return p;
    std::vector<Curve> iso = iso_contours(s, s.distance_field(p), dist);
    if (iso.empty()) throw std::runtime_error("no level set at the requested distance");
    return iso.front().eval(0.0);
}

}  // namespace

PYBIND11_MODULE(_loopgeo, m) {
    m.doc() = "geodesic length bounds on triangulated surfaces";

    py::class_<Surface>(m, "Surface")
        .def_property_readonly("vertex_count", &Surface::vertex_count)
        .def_property_readonly("face_count", &Surface::face_count)
        .def("mean_edge_length", &Surface::mean_edge_length)
        .def("total_area", &Surface::total_area)
        .def(
            "distance",
            [](const Surface& s, int v0, int v1) {
                return s.distance(s.vertex_point(v0), s.vertex_point(v1));
            },
            py::arg("v0"), py::arg("v1"))
        .def(
            "invariants",
            [](const Surface& s, int samples, uint64_t seed) {
                SurfaceInvariants inv = s.invariants(samples, seed);
                py::dict d;
                d["diameter_est"] = inv.diameter_est;
                d["area"] = inv.area;
                d["curv_lower_est"] = inv.curv_lower_est;
                return d;
            },
            py::arg("samples") = 8, py::arg("seed") = 1);

    m.def("load_off", &load_off, py::arg("path"), py::arg("tol_geo") = 0.01,
          py::arg("steiner") = 2);
    m.def("load_obj", &load_obj, py::arg("path"), py::arg("tol_geo") = 0.01,
          py::arg("steiner") = 2);
    m.def("make_icosphere", &make_icosphere, py::arg("subdiv"), py::arg("radius") = 1.0,
          py::arg("tol_geo") = 0.01, py::arg("steiner") = 2);
    m.def("make_ellipsoid", &make_ellipsoid, py::arg("subdiv"), py::arg("ax"), py::arg("ay"),
          py::arg("az"), py::arg("tol_geo") = 0.01, py::arg("steiner") = 2);
    m.def("make_flat_torus", &make_flat_torus, py::arg("n"), py::arg("tol_geo") = 0.01,
          py::arg("steiner") = 2);

    m.def(
        "bounds_report",
        [](int n, double v, double D, double c, double c1, double c2) {
            GeometryParams p = GeometryParams::make(n, v, D, c);
            p.validate();
            BoundReport r = compute_bound_report(p, c1, c2);
            py::dict d;
            d["r"] = r.r.to_double();
            d["R"] = r.R.to_double();
            d["ball_count"] = logscalar_dict(r.N_bound);
            d["net_size"] = logscalar_dict(r.net_size_bound);
            d["width"] = logscalar_dict(r.W_bound);
            d["length"] = logscalar_dict(r.L_bound);
            return d;
        },
        py::arg("n"), py::arg("v"), py::arg("D"), py::arg("c"), py::arg("c1") = 1.0,
        py::arg("c2") = 1.0);

    m.def(
        "geodesic_lengths",
        [](const Surface& s, int p_vertex, double q_dist, int m) {
            SurfacePoint p = s.vertex_point(p_vertex);
            SurfacePoint q = resolve(s, p_vertex, q_dist);
            std::vector<double> lens;
            for (const Curve& g : find_geodesics(s, p, q, m)) lens.push_back(g.length());
            return lens;
        },
        py::arg("surface"), py::arg("p_vertex"), py::arg("q_dist"), py::arg("m"),
        "Lengths of m distinct geodesics from a vertex to the point at the "
        "given distance from it.");

    m.def(
        "shorten_path",
        [](const Surface& s, int v0, int via, int v1) {
            GeodesicPath g1 = s.geodesic(s.vertex_point(v0), s.vertex_point(via));
            GeodesicPath g2 = s.geodesic(s.vertex_point(via), s.vertex_point(v1));
            Curve c = Curve::concat(Curve::from_polyline(s, g1.points, false),
                                    Curve::from_polyline(s, g2.points, false));
            ShortenResult sr = birkhoff_shorten(c);
            py::dict d;
            d["input_length"] = c.length();
            d["output_length"] = sr.curve.length();
            d["passes"] = sr.passes;
            d["converged"] = sr.converged;
            return d;
        },
        py::arg("surface"), py::arg("v0"), py::arg("via"), py::arg("v1"),
        "Shorten the broken path v0 -> via -> v1.");

    m.def(
        "cover_summary",
        [](const Surface& s, double eps) {
            Cover c = build_cover(s, eps);
            py::dict d;
            d["centers"] = c.centers.size();
            d["nerve_edges"] = c.nerve_edges.size();
            d["valid"] = cover_is_valid(c, s.mean_edge_length());
            return d;
        },
        py::arg("surface"), py::arg("eps"));

    m.def(
        "calibrate",
        [](const Surface& s, int probes, uint64_t seed) {
            Calibration cal = calibrate_contraction(s, probes, seed);
            py::dict d;
            d["r_emp"] = cal.r_emp;
            d["R_emp"] = cal.R_emp;
            d["probes"] = cal.probes;
            return d;
        },
        py::arg("surface"), py::arg("probes") = 6, py::arg("seed") = 7);
}
