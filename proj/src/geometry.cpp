#include "hbsurf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "hbsurf/errors.hpp"

namespace hbsurf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCapRadiusSq = 0.75;  // z > 0.5 on the unit sphere
constexpr double kDerivativeStep = 1e-6;

double wrap_angle_from(double angle, double lower) {
  while (angle < lower - 1e-12) angle += kTwoPi;
  while (angle >= lower + kTwoPi - 1e-12) angle -= kTwoPi;
  return angle;
}

ParamRect clip(ParamRect box, const ParamRect& rect) {
  box.a1 = std::max(box.a1, rect.a1);
  box.b1 = std::min(box.b1, rect.b1);
  box.a2 = std::max(box.a2, rect.a2);
  box.b2 = std::min(box.b2, rect.b2);
  return box;
}

}  // namespace

std::string_view to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::SphereCap:
      return "sphere";
    case SurfaceKind::SphereSpherical:
      return "sphere-spherical";
    case SurfaceKind::Cylinder:
      return "cylinder";
    case SurfaceKind::Cone:
      return "cone";
    case SurfaceKind::Torus:
      return "torus";
    case SurfaceKind::Revolution:
      return "revolution";
  }
  return "unknown";
}

Chart Chart::sphere_cap() {
  Chart c;
  c.kind_ = SurfaceKind::SphereCap;
  const double half = std::sqrt(kCapRadiusSq);
  c.rect_ = {-half, half, -half, half};
  return c;
}

Chart Chart::sphere_spherical(ParamRect rect) {
  if (rect.a1 <= 0.0 || rect.b1 >= kPi) {
    throw InvalidConfig("spherical chart must exclude the poles");
  }
  Chart c;
  c.kind_ = SurfaceKind::SphereSpherical;
  c.rect_ = rect;
  return c;
}

Chart Chart::cylinder(double radius) {
  if (!(radius > 0.5)) throw InvalidConfig("cylinder chart x < -0.5 needs radius > 0.5");
  Chart c;
  c.kind_ = SurfaceKind::Cylinder;
  c.radius_ = radius;
  c.height_ = 1.0;
  const double lo = std::acos(-0.5 / radius);
  c.rect_ = {lo, kTwoPi - lo, 0.0, c.height_};
  return c;
}

Chart Chart::cone(double radius, double height) {
  if (!(radius > 0.0) || !(height > 0.0)) throw InvalidConfig("cone needs radius, height > 0");
  Chart c;
  c.kind_ = SurfaceKind::Cone;
  c.radius_ = radius;
  c.height_ = height;
  // apex excluded: the metric degenerates at z = h
  c.rect_ = {0.5 * kPi, 1.5 * kPi, 0.0, 0.95 * height};
  return c;
}

Chart Chart::torus(double major_radius, double minor_radius) {
  if (!(minor_radius > 0.0) || !(major_radius > minor_radius)) {
    throw InvalidConfig("torus needs R > r > 0");
  }
  Chart c;
  c.kind_ = SurfaceKind::Torus;
  c.radius_ = minor_radius;
  c.major_radius_ = major_radius;
  c.rect_ = {-kPi, kPi, -kPi, kPi};
  return c;
}

Chart Chart::revolution(RevolutionProfile profile, ParamRect rect) {
  if (!profile.alpha || !profile.d_alpha || !profile.beta || !profile.d_beta) {
    throw InvalidConfig("revolution profile needs alpha, beta and their first derivatives");
  }
  Chart c;
  c.kind_ = SurfaceKind::Revolution;
  c.rect_ = rect;
  c.profile_ = std::make_shared<const RevolutionProfile>(std::move(profile));

  // metric lower bound for geodesic_ball_box; g = diag(a'^2 + b'^2, a^2)
  double lowest = std::numeric_limits<double>::infinity();
  constexpr int kSamples = 512;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = rect.a1 + (rect.b1 - rect.a1) * i / kSamples;
    const double a = c.profile_->alpha(t);
    const double da = c.profile_->d_alpha(t);
    const double db = c.profile_->d_beta(t);
    if (!(a > 0.0)) throw InvalidConfig("revolution profile must keep alpha > 0");
    lowest = std::min({lowest, a * a, da * da + db * db});
  }
  c.min_metric_eigenvalue_ = 0.8 * lowest;
  return c;
}

Chart Chart::by_name(std::string_view name) {
  if (name == "sphere" || name == "sphere-cap") return sphere_cap();
  if (name == "sphere-spherical") return sphere_spherical();
  if (name == "cylinder") return cylinder();
  if (name == "cone") return cone();
  if (name == "torus") return torus();
  throw InvalidConfig("unknown surface: " + std::string(name));
}

bool Chart::contains(const Vec2& v, double slack) const {
  if (!v.allFinite() || !rect_.contains(v, slack)) return false;
  if (kind_ == SurfaceKind::SphereCap) return v.squaredNorm() <= kCapRadiusSq + slack;
  return true;
}

void Chart::require(const Vec2& v) const {
  if (!contains(v)) {
    std::ostringstream os;
    os << "point (" << v.x() << ", " << v.y() << ") outside the " << to_string(kind_)
       << " chart";
    throw OutOfChart(os.str());
  }
}

bool Chart::has_analytic_hessian() const {
  return kind_ != SurfaceKind::Revolution || (profile_->dd_alpha && profile_->dd_beta);
}

Vec3 Chart::forward(const Vec2& v) const {
  require(v);
  return forward_unchecked(v);
}

Mat32 Chart::jacobian(const Vec2& v) const {
  require(v);
  return jacobian_unchecked(v);
}

ChartHessian Chart::hessian(const Vec2& v) const {
  require(v);
  return hessian_unchecked(v);
}

Vec3 Chart::forward_unchecked(const Vec2& v) const {
  const double a = v.x();
  const double b = v.y();
  switch (kind_) {
    case SurfaceKind::SphereCap:
      return {a, b, std::sqrt(std::max(0.0, 1.0 - a * a - b * b))};
    case SurfaceKind::SphereSpherical:
      return {std::sin(a) * std::cos(b), std::sin(a) * std::sin(b), std::cos(a)};
    case SurfaceKind::Cylinder:
      return {radius_ * std::cos(a), radius_ * std::sin(a), b};
    case SurfaceKind::Cone: {
      const double rho = radius_ * (height_ - b) / height_;
      return {rho * std::cos(a), rho * std::sin(a), b};
    }
    case SurfaceKind::Torus: {
      const double w = major_radius_ + radius_ * std::cos(a);
      return {w * std::cos(b), w * std::sin(b), radius_ * std::sin(a)};
    }
    case SurfaceKind::Revolution: {
      const double r = profile_->alpha(a);
      return {r * std::cos(b), r * std::sin(b), profile_->beta(a)};
    }
  }
  return Vec3::Zero();
}

Mat32 Chart::jacobian_unchecked(const Vec2& v) const {
  const double a = v.x();
  const double b = v.y();
  Mat32 j;
  switch (kind_) {
    case SurfaceKind::SphereCap: {
      const double z = std::sqrt(1.0 - a * a - b * b);
      j << 1.0, 0.0, 0.0, 1.0, -a / z, -b / z;
      break;
    }
    case SurfaceKind::SphereSpherical: {
      const double st = std::sin(a), ct = std::cos(a), sp = std::sin(b), cp = std::cos(b);
      j << ct * cp, -st * sp, ct * sp, st * cp, -st, 0.0;
      break;
    }
    case SurfaceKind::Cylinder:
      j << -radius_ * std::sin(a), 0.0, radius_ * std::cos(a), 0.0, 0.0, 1.0;
      break;
    case SurfaceKind::Cone: {
      const double rho = radius_ * (height_ - b) / height_;
      const double slope = radius_ / height_;
      j << -rho * std::sin(a), -slope * std::cos(a), rho * std::cos(a), -slope * std::sin(a),
          0.0, 1.0;
      break;
    }
    case SurfaceKind::Torus: {
      const double w = major_radius_ + radius_ * std::cos(a);
      const double s1 = std::sin(a), c1 = std::cos(a), s2 = std::sin(b), c2 = std::cos(b);
      j << -radius_ * s1 * c2, -w * s2, -radius_ * s1 * s2, w * c2, radius_ * c1, 0.0;
      break;
    }
    case SurfaceKind::Revolution: {
      const double r = profile_->alpha(a), dr = profile_->d_alpha(a), dz = profile_->d_beta(a);
      const double s = std::sin(b), c = std::cos(b);
      j << dr * c, -r * s, dr * s, r * c, dz, 0.0;
      break;
    }
  }
  return j;
}

ChartHessian Chart::hessian_unchecked(const Vec2& v) const {
  const double a = v.x();
  const double b = v.y();
  ChartHessian h;
  switch (kind_) {
    case SurfaceKind::SphereCap: {
      const double z = std::sqrt(1.0 - a * a - b * b);
      const double z3 = z * z * z;
      h.d11 = {0.0, 0.0, -1.0 / z - a * a / z3};
      h.d12 = {0.0, 0.0, -a * b / z3};
      h.d22 = {0.0, 0.0, -1.0 / z - b * b / z3};
      break;
    }
    case SurfaceKind::SphereSpherical: {
      const double st = std::sin(a), ct = std::cos(a), sp = std::sin(b), cp = std::cos(b);
      h.d11 = {-st * cp, -st * sp, -ct};
      h.d12 = {-ct * sp, ct * cp, 0.0};
      h.d22 = {-st * cp, -st * sp, 0.0};
      break;
    }
    case SurfaceKind::Cylinder:
      h.d11 = {-radius_ * std::cos(a), -radius_ * std::sin(a), 0.0};
      break;
    case SurfaceKind::Cone: {
      const double rho = radius_ * (height_ - b) / height_;
      const double slope = radius_ / height_;
      h.d11 = {-rho * std::cos(a), -rho * std::sin(a), 0.0};
      h.d12 = {slope * std::sin(a), -slope * std::cos(a), 0.0};
      break;
    }
    case SurfaceKind::Torus: {
      const double w = major_radius_ + radius_ * std::cos(a);
      const double s1 = std::sin(a), c1 = std::cos(a), s2 = std::sin(b), c2 = std::cos(b);
      h.d11 = {-radius_ * c1 * c2, -radius_ * c1 * s2, -radius_ * s1};
      h.d12 = {radius_ * s1 * s2, -radius_ * s1 * c2, 0.0};
      h.d22 = {-w * c2, -w * s2, 0.0};
      break;
    }
    case SurfaceKind::Revolution: {
      const auto& p = *profile_;
      const double r = p.alpha(a), dr = p.d_alpha(a);
      const double ddr = p.dd_alpha
                             ? p.dd_alpha(a)
                             : (p.d_alpha(a + kDerivativeStep) - p.d_alpha(a - kDerivativeStep)) /
                                   (2.0 * kDerivativeStep);
      const double ddz = p.dd_beta
                             ? p.dd_beta(a)
                             : (p.d_beta(a + kDerivativeStep) - p.d_beta(a - kDerivativeStep)) /
                                   (2.0 * kDerivativeStep);
      const double s = std::sin(b), c = std::cos(b);
      h.d11 = {ddr * c, ddr * s, ddz};
      h.d12 = {-dr * s, dr * c, 0.0};
      h.d22 = {-r * c, -r * s, 0.0};
      break;
    }
  }
  return h;
}

Mat2 Chart::metric_unchecked(const Vec2& v) const {
  const Mat32 j = jacobian_unchecked(v);
  return j.transpose() * j;
}

std::array<Mat2, 2> Chart::metric_derivatives(const Vec2& v) const {
  require(v);
  if (!has_analytic_hessian()) {
    std::array<Mat2, 2> dg;
    for (int l = 0; l < 2; ++l) {
      Vec2 step = Vec2::Zero();
      step[l] = kDerivativeStep;
      dg[l] = (metric_unchecked(v + step) - metric_unchecked(v - step)) / (2.0 * kDerivativeStep);
    }
    return dg;
  }
  const Mat32 j = jacobian_unchecked(v);
  const ChartHessian h = hessian_unchecked(v);
  std::array<Mat2, 2> dg;
  for (int l = 0; l < 2; ++l) {
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < 2; ++k) {
        dg[l](i, k) = h(l, i).dot(j.col(k)) + j.col(i).dot(h(l, k));
      }
    }
  }
  return dg;
}

double Chart::surface_residual(const Vec3& u) const {
  switch (kind_) {
    case SurfaceKind::SphereCap:
    case SurfaceKind::SphereSpherical:
      return std::abs(u.norm() - 1.0);
    case SurfaceKind::Cylinder:
      return std::abs(std::hypot(u.x(), u.y()) - radius_);
    case SurfaceKind::Cone:
      return std::abs(std::hypot(u.x(), u.y()) - radius_ * (height_ - u.z()) / height_);
    case SurfaceKind::Torus: {
      const double w = std::hypot(u.x(), u.y()) - major_radius_;
      return std::abs(std::sqrt(w * w + u.z() * u.z()) - radius_);
    }
    case SurfaceKind::Revolution:
      break;
  }
  throw Unsupported("surface residual is not available for revolution charts");
}

Vec2 Chart::inverse(const Vec3& u) const {
  switch (kind_) {
    case SurfaceKind::SphereCap:
      return {u.x(), u.y()};
    case SurfaceKind::SphereSpherical:
      return {std::acos(std::clamp(u.z(), -1.0, 1.0)),
              wrap_angle_from(std::atan2(u.y(), u.x()), rect_.a2)};
    case SurfaceKind::Cylinder:
    case SurfaceKind::Cone:
      return {wrap_angle_from(std::atan2(u.y(), u.x()), rect_.a1), u.z()};
    case SurfaceKind::Torus:
      return {wrap_angle_from(std::atan2(u.z(), std::hypot(u.x(), u.y()) - major_radius_),
                              rect_.a1),
              wrap_angle_from(std::atan2(u.y(), u.x()), rect_.a2)};
    case SurfaceKind::Revolution:
      break;
  }
  throw Unsupported("inverse map is not available for revolution charts");
}

ParamRect Chart::geodesic_ball_box(const Vec2& v, double radius) const {
  ParamRect box{v.x() - radius, v.x() + radius, v.y() - radius, v.y() + radius};
  switch (kind_) {
    case SurfaceKind::SphereCap:
      // the projection is 1-Lipschitz and chords are shorter than arcs
      break;
    case SurfaceKind::SphereSpherical: {
      const double lo = v.x() - radius;
      const double hi = v.x() + radius;
      double dphi = kTwoPi;
      if (lo > 0.0 && hi < kPi) {
        const double s = std::min(std::sin(lo), std::sin(hi));
        dphi = std::min(kTwoPi, radius / s);
      }
      box = {lo, hi, v.y() - dphi, v.y() + dphi};
      break;
    }
    case SurfaceKind::Cylinder:
      box.a1 = v.x() - radius / radius_;
      box.b1 = v.x() + radius / radius_;
      break;
    case SurfaceKind::Cone: {
      const double slant = std::hypot(radius_, height_);
      const double s0 = (height_ - v.y()) / height_ * slant;
      double dtheta = kTwoPi;
      if (radius < s0) dtheta = std::asin(radius / s0) * slant / radius_;
      box = {v.x() - dtheta, v.x() + dtheta, height_ * (1.0 - (s0 + radius) / slant),
             height_ * (1.0 - (s0 - radius) / slant)};
      break;
    }
    case SurfaceKind::Torus:
      box = {v.x() - radius / radius_, v.x() + radius / radius_,
             v.y() - radius / (major_radius_ - radius_),
             v.y() + radius / (major_radius_ - radius_)};
      break;
    case SurfaceKind::Revolution: {
      const double d = radius / std::sqrt(min_metric_eigenvalue_);
      box = {v.x() - d, v.x() + d, v.y() - d, v.y() + d};
      break;
    }
  }
  return clip(box, rect_);
}

MetricData metric_data(const Chart& chart, const Vec2& v) {
  const Mat32 j = chart.jacobian(v);
  MetricData m;
  m.g = j.transpose() * j;
  m.g(0, 1) = m.g(1, 0) = 0.5 * (m.g(0, 1) + m.g(1, 0));
  const double det = m.g.determinant();
  if (!(det >= 1e-14)) {
    std::ostringstream os;
    os << "metric determinant " << det << " at (" << v.x() << ", " << v.y() << ")";
    throw SingularMetric(os.str());
  }
  m.g_inv << m.g(1, 1) / det, -m.g(0, 1) / det, -m.g(1, 0) / det, m.g(0, 0) / det;

  const auto dg = chart.metric_derivatives(v);
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int j2 = i; j2 < 2; ++j2) {
        double sum = 0.0;
        for (int s = 0; s < 2; ++s) {
          sum += m.g_inv(k, s) * (dg[j2](s, i) + dg[i](j2, s) - dg[s](i, j2));
        }
        m.christoffel[k](i, j2) = m.christoffel[k](j2, i) = 0.5 * sum;
      }
    }
  }
  return m;
}

double curve_length(const Chart& chart, std::span<const Vec2> path) {
  if (path.size() < 2) throw DegeneratePath("a path needs at least two points");
  double length = 0.0;
  const Mat32 j0 = chart.jacobian(path[0]);
  Mat2 g_prev = j0.transpose() * j0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Mat32 j = chart.jacobian(path[i]);
    const Mat2 g_next = j.transpose() * j;
    const Vec2 step = path[i] - path[i - 1];
    const double a = std::sqrt(std::max(0.0, step.dot(g_prev * step)));
    const double b = std::sqrt(std::max(0.0, step.dot(g_next * step)));
    length += 0.5 * (a + b);
    g_prev = g_next;
  }
  return length;
}

LocalJet pushforward_derivatives(double value, const Vec3& gradient, const Mat3& hessian,
                                 const Chart& chart, const Vec2& v) {
  const Mat32 j = chart.jacobian(v);
  const ChartHessian h = chart.hessian(v);
  const Vec3 t1 = j.col(0);
  const Vec3 t2 = j.col(1);
  return {value,
          gradient.dot(t1),
          gradient.dot(t2),
          t1.dot(hessian * t1) + gradient.dot(h.d11),
          t1.dot(hessian * t2) + gradient.dot(h.d12),
          t2.dot(hessian * t2) + gradient.dot(h.d22)};
}

}  // namespace hbsurf
