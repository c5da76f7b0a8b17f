#ifndef HBSURF_GEOMETRY_HPP
#define HBSURF_GEOMETRY_HPP

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace hbsurf {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat32 = Eigen::Matrix<double, 3, 2>;

enum class SurfaceKind { SphereCap, SphereSpherical, Cylinder, Cone, Torus, Revolution };

std::string_view to_string(SurfaceKind kind);

/// Closed rectangle [a1,b1] x [a2,b2] in local coordinates.
struct ParamRect {
  double a1 = 0.0;
  double b1 = 0.0;
  double a2 = 0.0;
  double b2 = 0.0;

  bool contains(const Vec2& v, double slack = 0.0) const {
    return v.x() >= a1 - slack && v.x() <= b1 + slack && v.y() >= a2 - slack &&
           v.y() <= b2 + slack;
  }
  Vec2 center() const { return {0.5 * (a1 + b1), 0.5 * (a2 + b2)}; }
  double width() const { return b1 - a1; }
  double height() const { return b2 - a2; }
};

/// Generating curve (alpha(t), beta(t)) of a surface of revolution around the z axis.
/// The second derivatives are optional; without them the chart falls back to
/// central differences for its Hessian and metric derivatives.
struct RevolutionProfile {
  std::function<double(double)> alpha;
  std::function<double(double)> d_alpha;
  std::function<double(double)> beta;
  std::function<double(double)> d_beta;
  std::function<double(double)> dd_alpha;
  std::function<double(double)> dd_beta;
};

/// Second partials of the chart map: d11 = d2u/dv1^2, d12 = d2u/dv1dv2, d22 = d2u/dv2^2.
struct ChartHessian {
  Vec3 d11 = Vec3::Zero();
  Vec3 d12 = Vec3::Zero();
  Vec3 d22 = Vec3::Zero();

  const Vec3& operator()(int i, int j) const {
    if (i == 0 && j == 0) return d11;
    if (i == 1 && j == 1) return d22;
    return d12;
  }
};

/// A parametric surface patch v -> u(v) restricted to a parameter rectangle.
///
/// Local coordinates per kind:
///   SphereCap        (x, y) projection of the unit sphere cap z > 0.5
///   SphereSpherical  (polar angle, azimuth) on the unit sphere
///   Cylinder         (angle, height), radius r, chart x < -0.5
///   Cone             (angle, height), base radius r, height h, chart x < 0, z <= 0.95 h
///   Torus            (tube angle, ring angle), radii R > r
///   Revolution       (profile parameter, rotation angle)
///
/// Charts are immutable values; every member is safe to call concurrently.
class Chart {
 public:
  static Chart sphere_cap();
  static Chart sphere_spherical(ParamRect rect = {0.05, 3.0915926535897933, -3.141592653589793,
                                                  3.141592653589793});
  static Chart cylinder(double radius = 1.0);
  static Chart cone(double radius = 1.0, double height = 2.0);
  static Chart torus(double major_radius = 2.0, double minor_radius = 1.0);
  static Chart revolution(RevolutionProfile profile, ParamRect rect);

  /// Chart by surface name ("sphere", "sphere-spherical", "cylinder", "cone", "torus").
  static Chart by_name(std::string_view name);

  SurfaceKind kind() const { return kind_; }
  const ParamRect& rect() const { return rect_; }
  double radius() const { return radius_; }
  double height() const { return height_; }
  double major_radius() const { return major_radius_; }

  /// True when v lies in the chart domain (the rectangle, and for the sphere cap the
  /// disk v1^2 + v2^2 <= 3/4).
  bool contains(const Vec2& v, double slack = 1e-12) const;

  Vec3 forward(const Vec2& v) const;
  Mat32 jacobian(const Vec2& v) const;
  ChartHessian hessian(const Vec2& v) const;

  /// Residual of the surface's implicit equation at an ambient point.
  double surface_residual(const Vec3& u) const;

  /// Local coordinates of an ambient point on the surface (inverse chart map).
  Vec2 inverse(const Vec3& u) const;

  /// Parameter box guaranteed to contain every chart point whose geodesic
  /// distance from v is below radius. Clipped to the chart rectangle.
  ParamRect geodesic_ball_box(const Vec2& v, double radius) const;

  /// Metric derivatives dg/dv_l, l = 0,1. Analytic when the Hessian is analytic.
  std::array<Mat2, 2> metric_derivatives(const Vec2& v) const;

  bool has_analytic_hessian() const;

 private:
  Chart() = default;
  void require(const Vec2& v) const;
  Vec3 forward_unchecked(const Vec2& v) const;
  Mat32 jacobian_unchecked(const Vec2& v) const;
  ChartHessian hessian_unchecked(const Vec2& v) const;
  Mat2 metric_unchecked(const Vec2& v) const;

  SurfaceKind kind_ = SurfaceKind::SphereCap;
  ParamRect rect_;
  double radius_ = 1.0;
  double height_ = 0.0;
  double major_radius_ = 0.0;
  std::shared_ptr<const RevolutionProfile> profile_;
  double min_metric_eigenvalue_ = 0.0;
};

/// Riemannian metric, its inverse, and the Christoffel symbols of the second kind
/// at one point. christoffel[k](i, j) holds Gamma^k_ij.
struct MetricData {
  Mat2 g = Mat2::Identity();
  Mat2 g_inv = Mat2::Identity();
  std::array<Mat2, 2> christoffel{Mat2::Zero(), Mat2::Zero()};

  /// Acceleration term Gamma^k_ij w^i w^j for the geodesic equations.
  Vec2 contract(const Vec2& w) const {
    return {w.dot(christoffel[0] * w), w.dot(christoffel[1] * w)};
  }
};

MetricData metric_data(const Chart& chart, const Vec2& v);

/// Length of a polyline in local coordinates under the chart metric (trapezoidal rule).
double curve_length(const Chart& chart, std::span<const Vec2> path);

/// Local partials of f o chart up to order two, graded lexicographic:
/// f, f_v1, f_v2, f_v1v1, f_v1v2, f_v2v2.
using LocalJet = std::array<double, 6>;

LocalJet pushforward_derivatives(double value, const Vec3& gradient, const Mat3& hessian,
                                 const Chart& chart, const Vec2& v);

}  // namespace hbsurf

#endif  // HBSURF_GEOMETRY_HPP
