#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "hbsurf/errors.hpp"
#include "hbsurf/geodesics.hpp"
#include "hbsurf/harness.hpp"
#include "hbsurf/interpolant.hpp"
#include "hbsurf/pointsets.hpp"

namespace py = pybind11;
using namespace hbsurf;

namespace {

using Points2 = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;
using Points3 = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

std::vector<Vec2> rows_of(const Points2& m) {
  std::vector<Vec2> v(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) v[i] = m.row(i).transpose();
  return v;
}

Points2 local_of(const std::vector<SurfacePoint>& pts) {
  Points2 m(pts.size(), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) m.row(i) = pts[i].v.transpose();
  return m;
}

Points2 nodes(const std::string& surface, std::size_t n, std::size_t skip) {
  return local_of(nodes_on_surface(Chart::by_name(surface), n, skip));
}

Points2 evaluation_points(const std::string& surface, std::size_t n, std::uint64_t seed) {
  return local_of(eval_points(Chart::by_name(surface), n, seed));
}

Points3 to_surface(const std::string& surface, const Points2& v) {
  const Chart c = Chart::by_name(surface);
  Points3 x(v.rows(), 3);
  for (Eigen::Index i = 0; i < v.rows(); ++i) x.row(i) = c.forward(v.row(i).transpose()).transpose();
  return x;
}

double distance(const std::string& surface, const Vec2& a, const Vec2& b) {
  return distance_function(Chart::by_name(surface))(a, b);
}

py::dict bvp(const std::string& surface, const Vec2& a, const Vec2& b, int segments) {
  BvpSettings s;
  s.segments = segments;
  const GeodesicPath p = geodesic_bvp(Chart::by_name(surface), a, b, s);
  Points2 pts(p.points.size(), 2);
  for (std::size_t i = 0; i < p.points.size(); ++i) pts.row(i) = p.points[i].transpose();
  py::dict out;
  out["length"] = p.total_length;
  out["iterations"] = p.iterations;
  out["points"] = pts;
  out["arclength"] = p.arclength;
  return out;
}

// Interpolates a test function from its data at `node_v` and evaluates at `eval_v`.
Eigen::VectorXd interpolate(const std::string& surface, const Points2& node_v, const std::string& function,
                            int order, const Points2& eval_v, std::optional<double> delta,
                            std::optional<double> mu, int neighbors, const std::string& lacunary) {
  const Chart c = Chart::by_name(surface);
  std::vector<SurfacePoint> pts;
  for (Eigen::Index i = 0; i < node_v.rows(); ++i) {
    const Vec2 v = node_v.row(i).transpose();
    pts.push_back({static_cast<int>(i), v, c.forward(v)});
  }
  const auto samples = build_samples(c, pts, function, order, parse_lacunary(lacunary));
  const auto eval = rows_of(eval_v);
  const DistanceFn d = distance_function(c);
  double radius = 0.0;
  if (delta) {
    radius = *delta;
  } else {
    const CellIndex index(c, rows_of(node_v), d);
    radius = adaptive_delta(index, eval, neighbors);
  }
  BasisConfig basis = BasisConfig::defaults(order, radius);
  if (mu) basis.mu = *mu;
  const HermiteInterpolant h(c, samples, basis, d);
  Eigen::VectorXd out(eval.size());
  for (std::size_t i = 0; i < eval.size(); ++i) out[i] = h(eval[i]);
  return out;
}

std::string run_table(const std::string& config_json) {
  std::ostringstream out;
  write_report_json(run_experiment(config_from_json(config_json)), out);
  return out.str();
}

py::tuple function_jet(const std::string& id, const Vec3& x) {
  const FunctionJet f = test_function(id, x);
  return py::make_tuple(f.value, f.gradient, f.hessian);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hermite-Birkhoff interpolation on parametric surfaces";

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  py::register_exception<OutOfChart>(m, "OutOfChart", base.ptr());
  py::register_exception<EmptyStencil>(m, "EmptyStencil", base.ptr());
  py::register_exception<UnknownFunction>(m, "UnknownFunction", base.ptr());
  py::register_exception<InvalidConfig>(m, "InvalidConfig", base.ptr());

  m.def("nodes", &nodes, py::arg("surface"), py::arg("n"), py::arg("skip") = 0,
        "Halton nodes in chart coordinates, shape (n, 2)");
  m.def("eval_points", &evaluation_points, py::arg("surface"), py::arg("n"), py::arg("seed") = 1);
  m.def("to_surface", &to_surface, py::arg("surface"), py::arg("v"));
  m.def("distance", &distance, py::arg("surface"), py::arg("a"), py::arg("b"),
        "geodesic distance; closed form where one exists, else the BVP solver");
  m.def("geodesic_bvp", &bvp, py::arg("surface"), py::arg("a"), py::arg("b"), py::arg("segments") = 64);
  m.def("test_function", &function_jet, py::arg("id"), py::arg("x"));
  m.def("interpolate", &interpolate, py::arg("surface"), py::arg("nodes"), py::arg("function"),
        py::arg("order"), py::arg("eval"), py::arg("delta") = py::none(), py::arg("mu") = py::none(),
        py::arg("neighbors") = 12, py::arg("lacunary") = "none");
  m.def("run_table_json", &run_table, py::arg("config_json"));
}
