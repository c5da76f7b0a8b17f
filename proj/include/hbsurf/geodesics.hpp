#ifndef HBSURF_GEODESICS_HPP
#define HBSURF_GEODESICS_HPP

#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "hbsurf/geometry.hpp"

namespace hbsurf {

/// Discretized curve in local coordinates with cumulative arclength.
struct GeodesicPath {
  std::vector<Vec2> points;
  std::vector<double> arclength;
  double total_length = 0.0;
  /// Set by geodesic_ivp when the trajectory left the chart; the path is truncated there.
  std::optional<double> exit_arclength;
  /// Newton iterations spent by geodesic_bvp (finest level).
  int iterations = 0;
};

struct BvpSettings {
  int segments = 64;
  int max_iters = 200;
  double tol = 1e-10;

  void validate() const;
};

/// Great-circle distance between unit vectors, in [0, pi].
double sphere_distance(const Vec3& u, const Vec3& w);

enum class ConvertDirection { ToGeodesic, ToEuclidean };

/// Chord <-> arc conversion on the unit sphere: d_g = 2 asin(d_E / 2), d_E = 2 sin(d_g / 2).
double euclid_geodesic_convert(double d, ConvertDirection direction);

bool has_analytic_distance(const Chart& chart);

/// Closed-form geodesic distance on the sphere charts, the cylinder and the cone.
/// Angles are not wrapped across the chart boundary.
double analytic_distance(const Chart& chart, const Vec2& a, const Vec2& b);

/// Rescales a local direction to unit speed in the metric at v.
Vec2 unit_direction(const Chart& chart, const Vec2& v, const Vec2& direction);

/// Traces the geodesic from v0 with unit-speed initial velocity using classical RK4 on
/// (v, dv/ds). A trajectory that leaves the chart is truncated and flagged.
GeodesicPath geodesic_ivp(const Chart& chart, const Vec2& v0, const Vec2& dv0_unit, double s_end,
                          int steps);

/// Shortest path between two chart points by damped-Newton relaxation of the discretized
/// geodesic equations, initialised on the straight parameter segment.
GeodesicPath geodesic_bvp(const Chart& chart, const Vec2& a, const Vec2& b,
                          const BvpSettings& settings = {});

using DistanceFn = std::function<double(const Vec2&, const Vec2&)>;

/// Analytic distance where available, otherwise the boundary-value solver.
DistanceFn distance_function(const Chart& chart, BvpSettings settings = {});

/// CSV with header s,v1,v2,x,y,z.
void write_path_csv(const Chart& chart, const GeodesicPath& path, std::ostream& out);

}  // namespace hbsurf

#endif  // HBSURF_GEODESICS_HPP
