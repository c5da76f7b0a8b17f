#include "hbsurf/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "hbsurf/errors.hpp"

namespace hbsurf {

namespace {

constexpr double kChristoffelStep = 1e-6;

struct State {
  Vec2 v;
  Vec2 w;
};

State geodesic_rhs(const Chart& chart, const State& s) {
  const MetricData m = metric_data(chart, s.v);
  return {s.w, -m.contract(s.w)};
}

State axpy(const State& s, double h, const State& k) { return {s.v + h * k.v, s.w + h * k.w}; }

// Block-tridiagonal linear system with 2x2 blocks; row i couples x_{i-1}, x_i, x_{i+1}.
struct BlockTridiagonal {
  std::vector<Mat2> lower, diag, upper;
  std::vector<Vec2> rhs;

  explicit BlockTridiagonal(std::size_t n) : lower(n), diag(n), upper(n), rhs(n) {}

  std::vector<Vec2> solve() const {
    const std::size_t n = diag.size();
    std::vector<Mat2> d(diag);
    std::vector<Vec2> r(rhs);
    for (std::size_t i = 1; i < n; ++i) {
      const Mat2 factor = lower[i] * d[i - 1].inverse();
      d[i] -= factor * upper[i - 1];
      r[i] -= factor * r[i - 1];
    }
    std::vector<Vec2> x(n);
    x[n - 1] = d[n - 1].inverse() * r[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i].inverse() * (r[i] - upper[i] * x[i + 1]);
    return x;
  }
};

// Discrete geodesic residual at interior node i, scaled by the squared mesh width:
//   x_{i+1} - 2 x_i + x_{i-1} + Gamma(x_i)(m_i, m_i),  m_i = (x_{i+1} - x_{i-1}) / 2
Vec2 node_residual(const MetricData& m, const Vec2& prev, const Vec2& here, const Vec2& next) {
  const Vec2 mid = 0.5 * (next - prev);
  return next - 2.0 * here + prev + m.contract(mid);
}

double max_residual(const Chart& chart, const std::vector<Vec2>& x) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const MetricData m = metric_data(chart, x[i]);
    worst = std::max(worst, node_residual(m, x[i - 1], x[i], x[i + 1]).cwiseAbs().maxCoeff());
  }
  return worst;
}

bool inside(const Chart& chart, const std::vector<Vec2>& x) {
  return std::all_of(x.begin(), x.end(), [&](const Vec2& p) { return chart.contains(p); });
}

// Damped Newton on the interior nodes of x (endpoints fixed). Returns iteration count.
int relax(const Chart& chart, std::vector<Vec2>& x, const BvpSettings& settings) {
  const std::size_t interior = x.size() - 2;
  double residual = max_residual(chart, x);
  double damping = 1.0;
  bool blocked = false;
  for (int iter = 1; iter <= settings.max_iters; ++iter) {
    BlockTridiagonal system(interior);
    for (std::size_t k = 0; k < interior; ++k) {
      const std::size_t i = k + 1;
      const MetricData m = metric_data(chart, x[i]);
      const Vec2 mid = 0.5 * (x[i + 1] - x[i - 1]);
      // d/dm of Gamma^c_ab m^a m^b is 2 Gamma^c_ab m^a; dm/dx_{i+-1} = +-1/2
      Mat2 coupling;
      for (int c = 0; c < 2; ++c) coupling.row(c) = (m.christoffel[c] * mid).transpose();
      Mat2 dgamma;
      for (int l = 0; l < 2; ++l) {
        Vec2 step = Vec2::Zero();
        step[l] = kChristoffelStep;
        const bool has_plus = chart.contains(x[i] + step);
        const bool has_minus = chart.contains(x[i] - step);
        const Vec2 plus = has_plus ? metric_data(chart, x[i] + step).contract(mid) : m.contract(mid);
        const Vec2 minus =
            has_minus ? metric_data(chart, x[i] - step).contract(mid) : m.contract(mid);
        const double span = (has_plus ? 1.0 : 0.0) + (has_minus ? 1.0 : 0.0);
        dgamma.col(l) = span > 0.0 ? Vec2((plus - minus) / (span * kChristoffelStep)) : Vec2::Zero();
      }
      system.lower[k] = Mat2::Identity() - coupling;
      system.diag[k] = -2.0 * Mat2::Identity() + dgamma;
      system.upper[k] = Mat2::Identity() + coupling;
      system.rhs[k] = -node_residual(m, x[i - 1], x[i], x[i + 1]);
    }
    const std::vector<Vec2> delta = system.solve();
    double update = 0.0;
    for (const Vec2& d : delta) update = std::max(update, d.cwiseAbs().maxCoeff());
    if (!std::isfinite(update)) throw NoConvergence("singular Newton system", iter, residual);

    // a trial rejected for leaving the chart marks a geodesic pressing on the boundary
    blocked = false;
    bool accepted = false;
    for (int halvings = 0; halvings < 40; ++halvings) {
      std::vector<Vec2> trial(x);
      for (std::size_t k = 0; k < interior; ++k) trial[k + 1] += damping * delta[k];
      if (!inside(chart, trial)) {
        blocked = true;
      } else {
        const double trial_residual = max_residual(chart, trial);
        if (trial_residual <= residual || update < settings.tol) {
          x = std::move(trial);
          residual = trial_residual;
          accepted = true;
          break;
        }
      }
      damping *= 0.5;
    }
    if (!accepted) {
      if (blocked) throw SegmentLeavesChart("geodesic leaves the chart");
      throw NoConvergence("damping exhausted", iter, residual);
    }
    if (update < settings.tol && damping == 1.0) return iter;
    damping = std::min(1.0, 2.0 * damping);
  }
  if (blocked) throw SegmentLeavesChart("geodesic leaves the chart");
  throw NoConvergence("iteration limit reached", settings.max_iters, residual);
}

}  // namespace

void BvpSettings::validate() const {
  if (segments < 8) throw InvalidConfig("BVP needs at least 8 segments");
  if (!(tol > 0.0)) throw InvalidConfig("BVP tolerance must be positive");
  if (max_iters < 1) throw InvalidConfig("BVP needs at least one iteration");
}

double sphere_distance(const Vec3& u, const Vec3& w) {
  if (std::abs(u.norm() - 1.0) > 1e-10 || std::abs(w.norm() - 1.0) > 1e-10) {
    throw NotOnSphere("sphere_distance expects unit vectors");
  }
  const double dot = std::clamp(u.dot(w), -1.0, 1.0);
  // arccos loses half the digits near 1; the chord form is exact there
  if (dot > 0.5) return 2.0 * std::asin(std::min(1.0, 0.5 * (u - w).norm()));
  return std::acos(dot);
}

double euclid_geodesic_convert(double d, ConvertDirection direction) {
  if (direction == ConvertDirection::ToGeodesic) {
    if (!(d >= 0.0 && d <= 2.0)) throw OutOfRange("chord length must lie in [0, 2]");
    return 2.0 * std::asin(0.5 * d);
  }
  if (!(d >= 0.0 && d <= std::numbers::pi)) throw OutOfRange("arc length must lie in [0, pi]");
  return 2.0 * std::sin(0.5 * d);
}

bool has_analytic_distance(const Chart& chart) {
  switch (chart.kind()) {
    case SurfaceKind::SphereCap:
    case SurfaceKind::SphereSpherical:
    case SurfaceKind::Cylinder:
    case SurfaceKind::Cone:
      return true;
    default:
      return false;
  }
}

double analytic_distance(const Chart& chart, const Vec2& a, const Vec2& b) {
  switch (chart.kind()) {
    case SurfaceKind::SphereCap:
    case SurfaceKind::SphereSpherical:
      return sphere_distance(chart.forward(a), chart.forward(b));
    case SurfaceKind::Cylinder: {
      if (!chart.contains(a) || !chart.contains(b)) throw OutOfChart("cylinder distance");
      return std::hypot(chart.radius() * (a.x() - b.x()), a.y() - b.y());
    }
    case SurfaceKind::Cone: {
      if (!chart.contains(a) || !chart.contains(b)) throw OutOfChart("cone distance");
      const double r = chart.radius();
      const double h = chart.height();
      const double slant = std::hypot(r, h);
      const double sa = (h - a.y()) / h * slant;
      const double sb = (h - b.y()) / h * slant;
      const double half_angle = 0.5 * (a.x() - b.x()) * r / slant;
      const double s = std::sin(half_angle);
      return std::sqrt((sa - sb) * (sa - sb) + 4.0 * sa * sb * s * s);
    }
    default:
      break;
  }
  throw Unsupported(std::string("no closed-form distance on ") +
                    std::string(to_string(chart.kind())) + "; use geodesic_bvp");
}

Vec2 unit_direction(const Chart& chart, const Vec2& v, const Vec2& direction) {
  const MetricData m = metric_data(chart, v);
  const double speed = std::sqrt(direction.dot(m.g * direction));
  if (!(speed > 0.0)) throw NotUnitSpeed("zero direction");
  return direction / speed;
}

GeodesicPath geodesic_ivp(const Chart& chart, const Vec2& v0, const Vec2& dv0_unit, double s_end,
                          int steps) {
  if (steps < 16) throw InvalidConfig("geodesic_ivp needs at least 16 steps");
  if (!(s_end > 0.0)) throw InvalidConfig("geodesic_ivp needs s_end > 0");
  const MetricData m0 = metric_data(chart, v0);
  const double speed_sq = dv0_unit.dot(m0.g * dv0_unit);
  if (std::abs(speed_sq - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "initial velocity has metric norm^2 " << speed_sq;
    throw NotUnitSpeed(os.str());
  }

  const double h = s_end / steps;
  GeodesicPath path;
  path.points.reserve(steps + 1);
  path.arclength.reserve(steps + 1);
  path.points.push_back(v0);
  path.arclength.push_back(0.0);

  State s{v0, dv0_unit};
  for (int i = 0; i < steps; ++i) {
    State next;
    try {
      const State k1 = geodesic_rhs(chart, s);
      const State k2 = geodesic_rhs(chart, axpy(s, 0.5 * h, k1));
      const State k3 = geodesic_rhs(chart, axpy(s, 0.5 * h, k2));
      const State k4 = geodesic_rhs(chart, axpy(s, h, k3));
      next.v = s.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
      next.w = s.w + h / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
    } catch (const OutOfChart&) {
      next.v = Vec2::Constant(std::numeric_limits<double>::quiet_NaN());
    }
    if (!chart.contains(next.v)) {
      path.exit_arclength = path.arclength.back();
      break;
    }
    s = next;
    path.points.push_back(s.v);
    // fixed step: the last sample lands on s_end exactly
    path.arclength.push_back(i + 1 == steps ? s_end : (i + 1) * h);
  }
  path.total_length = path.arclength.back();
  return path;
}

GeodesicPath geodesic_bvp(const Chart& chart, const Vec2& a, const Vec2& b,
                          const BvpSettings& settings) {
  settings.validate();
  if (!chart.contains(a) || !chart.contains(b)) throw OutOfChart("BVP endpoints outside chart");
  if ((a - b).norm() == 0.0) throw InvalidConfig("BVP endpoints coincide");

  const int coarse_n = settings.segments;
  std::vector<Vec2> coarse(coarse_n + 1);
  for (int i = 0; i <= coarse_n; ++i) {
    coarse[i] = a + (b - a) * (static_cast<double>(i) / coarse_n);
    if (!chart.contains(coarse[i])) throw SegmentLeavesChart("initial segment leaves the chart");
  }
  relax(chart, coarse, settings);
  const double coarse_length = curve_length(chart, coarse);

  // second level at half the mesh width, seeded by midpoint interpolation
  const int fine_n = 2 * coarse_n;
  std::vector<Vec2> fine(fine_n + 1);
  for (int i = 0; i <= coarse_n; ++i) fine[2 * i] = coarse[i];
  for (int i = 0; i < coarse_n; ++i) fine[2 * i + 1] = 0.5 * (coarse[i] + coarse[i + 1]);
  if (!inside(chart, fine)) throw SegmentLeavesChart("geodesic leaves the chart");
  const int iterations = relax(chart, fine, settings);
  const double fine_length = curve_length(chart, fine);

  // both levels carry an h^2 error term; extrapolate it away
  const double length = (4.0 * fine_length - coarse_length) / 3.0;

  GeodesicPath path;
  path.points = std::move(fine);
  path.iterations = iterations;
  path.total_length = length;
  path.arclength.resize(path.points.size());
  for (int i = 0; i <= fine_n; ++i) path.arclength[i] = length * i / fine_n;
  path.arclength.back() = length;
  return path;
}

DistanceFn distance_function(const Chart& chart, BvpSettings settings) {
  if (has_analytic_distance(chart)) {
    return [chart](const Vec2& a, const Vec2& b) { return analytic_distance(chart, a, b); };
  }
  settings.validate();
  return [chart, settings](const Vec2& a, const Vec2& b) {
    if ((a - b).norm() == 0.0) return 0.0;
    return geodesic_bvp(chart, a, b, settings).total_length;
  };
}

void write_path_csv(const Chart& chart, const GeodesicPath& path, std::ostream& out) {
  out << "s,v1,v2,x,y,z\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < path.points.size(); ++i) {
    const Vec2& v = path.points[i];
    const Vec3 u = chart.forward(v);
    out << path.arclength[i] << ',' << v.x() << ',' << v.y() << ',' << u.x() << ',' << u.y()
        << ',' << u.z() << '\n';
  }
}

}  // namespace hbsurf
