#ifndef HBSURF_POINTSETS_HPP
#define HBSURF_POINTSETS_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hbsurf/geodesics.hpp"
#include "hbsurf/geometry.hpp"

namespace hbsurf {

/// Radical inverse of index in the given base.
double radical_inverse(std::uint64_t index, unsigned base);

/// Halton pairs in bases 2 and 3, indices skip+1 ... skip+count.
std::vector<Vec2> halton(std::size_t count, std::size_t skip = 0);

/// SplitMix64 stream; uniform() draws doubles in [0, 1) from the top 53 bits.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

struct SurfacePoint {
  int id = 0;
  Vec2 v = Vec2::Zero();
  Vec3 x = Vec3::Zero();
};

/// Interpolation nodes: Halton pairs mapped onto the sphere cap (rejection in the disk
/// shadow), the cylinder (x < -0.5) or the cone (x < 0), drawn until count survive.
std::vector<SurfacePoint> nodes_on_surface(const Chart& chart, std::size_t count,
                                           std::size_t skip = 0);

/// Evaluation points: generalized spiral points on the sphere cap, seeded uniform pairs
/// mapped like the nodes on the cylinder and cone.
std::vector<SurfacePoint> eval_points(const Chart& chart, std::size_t n_eval,
                                      std::uint64_t seed = 1);

/// Regular per_side x per_side grid over the chart rectangle, restricted to the chart.
std::vector<Vec2> probe_grid(const Chart& chart, int per_side = 200);

std::vector<Vec2> local_coordinates(std::span<const SurfacePoint> points);

/// Uniform grid over the chart rectangle holding node ids per cell. Range queries
/// visit the cells overlapping the chart's geodesic ball box and filter candidates by
/// exact geodesic distance. Read-only after construction.
class CellIndex {
 public:
  using Hit = std::pair<int, double>;  // node id, geodesic distance

  /// cell_size <= 0 picks a size giving about two nodes per cell.
  CellIndex(Chart chart, std::vector<Vec2> nodes, DistanceFn distance, double cell_size = 0.0);

  /// Nodes at geodesic distance < radius, ordered by id.
  std::vector<Hit> within(const Vec2& u, double radius) const;

  /// The count nearest nodes ordered by (distance, id).
  std::vector<Hit> nearest(const Vec2& u, std::size_t count) const;

  const Chart& chart() const { return chart_; }
  const std::vector<Vec2>& nodes() const { return nodes_; }
  const DistanceFn& distance() const { return distance_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t cell_count() const { return cells_.size(); }
  const std::vector<int>& cell(std::size_t c) const { return cells_[c]; }

 private:
  std::size_t cell_x(double v1) const;
  std::size_t cell_y(double v2) const;

  Chart chart_;
  std::vector<Vec2> nodes_;
  DistanceFn distance_;
  std::size_t nx_ = 1;
  std::size_t ny_ = 1;
  double cell_w_ = 1.0;
  double cell_h_ = 1.0;
  std::vector<std::vector<int>> cells_;
};

/// Ids of nodes with geodesic distance < radius from u.
std::vector<int> neighbors_within(const CellIndex& index, const Vec2& u, double radius);

struct PointSetStats {
  double fill = 0.0;
  double separation = 0.0;
  std::size_t n = 0;
};

/// max over probes of the geodesic distance to the nearest node.
double fill_distance(const CellIndex& index, std::span<const Vec2> probes);
double fill_distance(const Chart& chart, std::span<const Vec2> nodes, std::span<const Vec2> probes);

/// Half the smallest pairwise geodesic distance. Throws DegenerateSet on duplicates.
double separation_distance(const CellIndex& index);
double separation_distance(const Chart& chart, std::span<const Vec2> nodes);

PointSetStats point_set_stats(const CellIndex& index, std::span<const Vec2> probes);

}  // namespace hbsurf

#endif  // HBSURF_POINTSETS_HPP
