#include "hbsurf/pointsets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hbsurf/errors.hpp"

namespace hbsurf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kMaxCellsPerAxis = 1024;

// Maps a unit-square pair onto the chart following the node construction; returns false
// when the mapped point falls outside the chart.
bool map_unit_pair(const Chart& chart, double p, double q, SurfacePoint& out) {
  switch (chart.kind()) {
    case SurfaceKind::SphereCap: {
      const double half = chart.rect().b1;
      const Vec2 v{-half + 2.0 * half * p, -half + 2.0 * half * q};
      if (!(v.squaredNorm() < 0.75)) return false;
      out.v = v;
      out.x = chart.forward(v);
      return true;
    }
    case SurfaceKind::Cylinder: {
      const double theta = kTwoPi * p;
      const Vec3 x{chart.radius() * std::cos(theta), chart.radius() * std::sin(theta), q};
      if (!(x.x() < -0.5)) return false;
      out.v = {theta, q};
      out.x = x;
      return chart.contains(out.v);
    }
    case SurfaceKind::Cone: {
      const double theta = kTwoPi * p;
      const double h = chart.height();
      const double z = h * q;
      const double rho = (h - z) / h * chart.radius();
      const Vec3 x{rho * std::cos(theta), rho * std::sin(theta), z};
      if (!(x.x() < 0.0)) return false;
      out.v = {theta, z};
      out.x = x;
      return chart.contains(out.v);
    }
    default:
      break;
  }
  throw Unsupported("point generation supports the sphere cap, cylinder and cone");
}

}  // namespace

double radical_inverse(std::uint64_t index, unsigned base) {
  double result = 0.0;
  double scale = 1.0 / base;
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale /= base;
  }
  return result;
}

std::vector<Vec2> halton(std::size_t count, std::size_t skip) {
  std::vector<Vec2> out;
  out.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) {
    const std::uint64_t index = skip + i;
    out.emplace_back(radical_inverse(index, 2), radical_inverse(index, 3));
  }
  return out;
}

std::vector<SurfacePoint> nodes_on_surface(const Chart& chart, std::size_t count,
                                           std::size_t skip) {
  std::vector<SurfacePoint> nodes;
  nodes.reserve(count);
  for (std::uint64_t index = skip + 1; nodes.size() < count; ++index) {
    SurfacePoint pt;
    if (map_unit_pair(chart, radical_inverse(index, 2), radical_inverse(index, 3), pt)) {
      pt.id = static_cast<int>(nodes.size());
      nodes.push_back(pt);
    }
  }
  return nodes;
}

std::vector<SurfacePoint> eval_points(const Chart& chart, std::size_t n_eval,
                                      std::uint64_t seed) {
  std::vector<SurfacePoint> points;
  points.reserve(n_eval);
  if (chart.kind() == SurfaceKind::SphereCap) {
    // generalized spiral on the whole sphere; grow the total until the cap z > 0.5
    // holds n_eval of them, keeping the ones nearest the pole
    for (std::size_t total = std::max<std::size_t>(n_eval, 3);; ++total) {
      std::vector<Vec3> cap;
      double phi = 0.0;
      const double step = 3.6 / std::sqrt(static_cast<double>(total));
      for (std::size_t k = 1; k <= total; ++k) {
        const double h = -1.0 + 2.0 * static_cast<double>(k - 1) / static_cast<double>(total - 1);
        if (k == 1 || k == total) {
          phi = 0.0;
        } else {
          phi = std::fmod(phi + step / std::sqrt(1.0 - h * h), kTwoPi);
        }
        if (h > 0.5) {
          const double s = std::sqrt(std::max(0.0, 1.0 - h * h));
          cap.emplace_back(s * std::cos(phi), s * std::sin(phi), h);
        }
      }
      if (cap.size() >= n_eval) {
        for (std::size_t i = cap.size() - n_eval; i < cap.size(); ++i) {
          SurfacePoint pt;
          pt.id = static_cast<int>(points.size());
          pt.v = chart.inverse(cap[i]);
          pt.x = chart.forward(pt.v);
          points.push_back(pt);
        }
        return points;
      }
    }
  }
  SplitMix64 rng(seed);
  while (points.size() < n_eval) {
    const double p = rng.uniform();
    const double q = rng.uniform();
    SurfacePoint pt;
    if (map_unit_pair(chart, p, q, pt)) {
      pt.id = static_cast<int>(points.size());
      points.push_back(pt);
    }
  }
  return points;
}

std::vector<Vec2> probe_grid(const Chart& chart, int per_side) {
  if (per_side < 2) throw InvalidConfig("probe grid needs at least 2 points per side");
  const ParamRect& r = chart.rect();
  std::vector<Vec2> probes;
  probes.reserve(static_cast<std::size_t>(per_side) * per_side);
  for (int i = 0; i < per_side; ++i) {
    for (int j = 0; j < per_side; ++j) {
      const Vec2 v{r.a1 + r.width() * i / (per_side - 1), r.a2 + r.height() * j / (per_side - 1)};
      if (chart.contains(v)) probes.push_back(v);
    }
  }
  return probes;
}

std::vector<Vec2> local_coordinates(std::span<const SurfacePoint> points) {
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.v);
  return out;
}

CellIndex::CellIndex(Chart chart, std::vector<Vec2> nodes, DistanceFn distance, double cell_size)
    : chart_(std::move(chart)), nodes_(std::move(nodes)), distance_(std::move(distance)) {
  const ParamRect& r = chart_.rect();
  if (!(cell_size > 0.0)) {
    const double area = r.width() * r.height();
    cell_size = std::sqrt(2.0 * area / std::max<std::size_t>(nodes_.size(), 1));
  }
  nx_ = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(r.width() / cell_size)), 1,
                                kMaxCellsPerAxis);
  ny_ = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(r.height() / cell_size)), 1,
                                kMaxCellsPerAxis);
  cell_w_ = r.width() / static_cast<double>(nx_);
  cell_h_ = r.height() / static_cast<double>(ny_);
  cells_.assign(nx_ * ny_, {});
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    if (!chart_.contains(nodes_[id])) throw OutOfChart("node outside the indexed chart");
    cells_[cell_y(nodes_[id].y()) * nx_ + cell_x(nodes_[id].x())].push_back(static_cast<int>(id));
  }
}

std::size_t CellIndex::cell_x(double v1) const {
  const double t = std::floor((v1 - chart_.rect().a1) / cell_w_);
  return static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(nx_ - 1)));
}

std::size_t CellIndex::cell_y(double v2) const {
  const double t = std::floor((v2 - chart_.rect().a2) / cell_h_);
  return static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(ny_ - 1)));
}

std::vector<CellIndex::Hit> CellIndex::within(const Vec2& u, double radius) const {
  std::vector<Hit> hits;
  if (!(radius > 0.0) || nodes_.empty()) return hits;
  const ParamRect box = chart_.geodesic_ball_box(u, radius);
  if (box.a1 > box.b1 || box.a2 > box.b2) return hits;
  const std::size_t x0 = cell_x(box.a1), x1 = cell_x(box.b1);
  const std::size_t y0 = cell_y(box.a2), y1 = cell_y(box.b2);
  for (std::size_t cy = y0; cy <= y1; ++cy) {
    for (std::size_t cx = x0; cx <= x1; ++cx) {
      for (int id : cells_[cy * nx_ + cx]) {
        const double d = distance_(u, nodes_[id]);
        if (d < radius) hits.emplace_back(id, d);
      }
    }
  }
  std::sort(hits.begin(), hits.end());
  return hits;
}

std::vector<CellIndex::Hit> CellIndex::nearest(const Vec2& u, std::size_t count) const {
  count = std::min(count, nodes_.size());
  if (count == 0) return {};
  double radius = std::max(cell_w_, cell_h_) * std::sqrt(static_cast<double>(count));
  // grow until the query box spans the whole rectangle
  for (;;) {
    std::vector<Hit> hits = within(u, radius);
    const ParamRect box = chart_.geodesic_ball_box(u, radius);
    const ParamRect& r = chart_.rect();
    const bool covers_all =
        box.a1 <= r.a1 && box.b1 >= r.b1 && box.a2 <= r.a2 && box.b2 >= r.b2;
    if (hits.size() >= count || covers_all) {
      if (hits.size() < count) {
        // every node is a candidate; distances exceed the radius
        hits.clear();
        for (std::size_t id = 0; id < nodes_.size(); ++id) {
          hits.emplace_back(static_cast<int>(id), distance_(u, nodes_[id]));
        }
      }
      std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        return a.second < b.second || (a.second == b.second && a.first < b.first);
      });
      hits.resize(count);
      return hits;
    }
    radius *= 2.0;
  }
}

std::vector<int> neighbors_within(const CellIndex& index, const Vec2& u, double radius) {
  std::vector<int> ids;
  for (const auto& hit : index.within(u, radius)) ids.push_back(hit.first);
  return ids;
}

double fill_distance(const CellIndex& index, std::span<const Vec2> probes) {
  if (index.size() == 0) throw DegenerateSet("fill distance needs at least one node");
  double fill = 0.0;
  for (const Vec2& p : probes) fill = std::max(fill, index.nearest(p, 1).front().second);
  return fill;
}

double fill_distance(const Chart& chart, std::span<const Vec2> nodes,
                     std::span<const Vec2> probes) {
  const CellIndex index(chart, {nodes.begin(), nodes.end()}, distance_function(chart));
  return fill_distance(index, probes);
}

double separation_distance(const CellIndex& index) {
  if (index.size() < 2) throw DegenerateSet("separation distance needs two nodes");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t id = 0; id < index.size(); ++id) {
    for (const auto& [other, d] : index.nearest(index.nodes()[id], 2)) {
      if (other == static_cast<int>(id)) continue;
      best = std::min(best, d);
    }
  }
  if (!(best > 0.0)) throw DegenerateSet("duplicate nodes");
  return 0.5 * best;
}

double separation_distance(const Chart& chart, std::span<const Vec2> nodes) {
  const CellIndex index(chart, {nodes.begin(), nodes.end()}, distance_function(chart));
  return separation_distance(index);
}

PointSetStats point_set_stats(const CellIndex& index, std::span<const Vec2> probes) {
  return {fill_distance(index, probes), separation_distance(index), index.size()};
}

}  // namespace hbsurf
