#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "hbsurf/errors.hpp"
#include "hbsurf/geodesics.hpp"
#include "hbsurf/pointsets.hpp"
#include "oracles.hpp"

using namespace hbsurf;
using std::numbers::pi;

namespace {

double brute_fill(const DistanceFn& d, const std::vector<Vec2>& nodes, const std::vector<Vec2>& probes) {
  double fill = 0.0;
  for (const Vec2& p : probes) {
    double best = INFINITY;
    for (const Vec2& z : nodes) best = std::min(best, d(p, z));
    fill = std::max(fill, best);
  }
  return fill;
}

double brute_separation(const DistanceFn& d, const std::vector<Vec2>& nodes) {
  double best = INFINITY;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) best = std::min(best, d(nodes[i], nodes[j]));
  }
  return 0.5 * best;
}

std::vector<Vec2> random_nodes(const Chart& c, std::mt19937_64& rng, std::size_t n) {
  std::vector<Vec2> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(oracle::random_in_chart(c, rng));
  return v;
}

}  // namespace

TEST(Halton, FirstIndices) {
  const auto h = halton(3);
  EXPECT_EQ(h[0], Vec2(0.5, 1.0 / 3));
  EXPECT_EQ(h[1], Vec2(0.25, 2.0 / 3));
  EXPECT_EQ(h[2].x(), 0.75);
  EXPECT_NEAR(h[2].y(), 1.0 / 9, 1e-16);
}

TEST(Halton, SkipShiftsTheIndex) {
  const auto a = halton(10);
  const auto b = halton(5, 5);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(a[5 + i], b[i]);
}

TEST(Nodes, SphereNodesLieOnTheCap) {
  const Chart c = Chart::sphere_cap();
  for (const auto& p : nodes_on_surface(c, 2000)) {
    EXPECT_GT(p.x.z(), 0.5);
    EXPECT_LT(std::abs(p.x.norm() - 1.0), 1e-15);
  }
}

TEST(Nodes, ConeNodesSatisfyTheChartConstraint) {
  const Chart c = Chart::cone();
  const auto nodes = nodes_on_surface(c, 2000);
  ASSERT_EQ(nodes.size(), 2000u);
  for (const auto& p : nodes) {
    EXPECT_LT(p.x.x(), 0.0);
    EXPECT_LT(std::abs(c.surface_residual(p.x)), 1e-12);
    EXPECT_LE(p.v.y(), 0.95 * 2);
  }
}

TEST(Nodes, CylinderNodesAreDeterministic) {
  const Chart c = Chart::cylinder();
  const auto a = nodes_on_surface(c, 100);
  const auto b = nodes_on_surface(c, 100);
  ASSERT_EQ(a.size(), 100u);
  EXPECT_EQ(a.front().v, b.front().v);
  EXPECT_EQ(a.front().x, b.front().x);
  for (const auto& p : a) EXPECT_LT(p.x.x(), -0.5);
  // the first Halton pair (0.5, 1/3) maps to angle pi, which survives the filter
  EXPECT_EQ(a.front().v, Vec2(pi, 1.0 / 3));
}

TEST(Nodes, IdsAreSequential) {
  const auto nodes = nodes_on_surface(Chart::sphere_cap(), 50);
  for (std::size_t i = 0; i < nodes.size(); ++i) EXPECT_EQ(nodes[i].id, static_cast<int>(i));
}

TEST(Nodes, UnsupportedSurface) {
  EXPECT_THROW(nodes_on_surface(Chart::torus(), 10), Unsupported);
}

TEST(EvalPoints, InsideTheChartDeterministicAndDistinct) {
  for (const Chart& c : {Chart::sphere_cap(), Chart::cylinder(), Chart::cone()}) {
    const auto a = eval_points(c, 50, 7);
    const auto b = eval_points(c, 50, 7);
    ASSERT_EQ(a.size(), 50u);
    std::set<std::pair<double, double>> seen;
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_TRUE(c.contains(a[i].v));
      EXPECT_EQ(a[i].v, b[i].v);
      seen.emplace(a[i].v.x(), a[i].v.y());
    }
    EXPECT_EQ(seen.size(), a.size());
  }
}

TEST(EvalPoints, SpiralPointsAreOnTheCap) {
  for (const auto& p : eval_points(Chart::sphere_cap(), 50)) {
    EXPECT_GT(p.x.z(), 0.5);
    EXPECT_NEAR(p.x.norm(), 1.0, 1e-15);
  }
}

TEST(EvalPoints, SeedChangesTheRandomStream) {
  const Chart c = Chart::cylinder();
  EXPECT_NE(eval_points(c, 5, 1)[0].v, eval_points(c, 5, 2)[0].v);
}

TEST(ProbeGrid, CoversTheChart) {
  const Chart c = Chart::cylinder();
  const auto probes = probe_grid(c);
  EXPECT_EQ(probes.size(), 200u * 200u);
  const auto cap = probe_grid(Chart::sphere_cap());
  EXPECT_LT(cap.size(), 200u * 200u);
  for (const Vec2& v : cap) EXPECT_TRUE(Chart::sphere_cap().contains(v));
  EXPECT_THROW(probe_grid(c, 1), InvalidConfig);
}

TEST(FillDistance, SingleNodeAtTheApex) {
  const Chart c = Chart::sphere_cap();
  const std::vector<Vec2> apex{Vec2(0, 0)};
  std::vector<Vec2> rim;
  for (int i = 0; i < 64; ++i) {
    const double t = 2 * pi * i / 64;
    rim.emplace_back(std::sqrt(0.75) * std::cos(t), std::sqrt(0.75) * std::sin(t));
  }
  EXPECT_NEAR(fill_distance(c, apex, rim), pi / 3, 1e-12);
  EXPECT_NEAR(fill_distance(c, apex, probe_grid(c)), pi / 3, 1e-2);
  EXPECT_NEAR(pi / 3, 1.0472, 1e-4);
}

TEST(FillDistance, NodesEqualProbes) {
  const Chart c = Chart::cone();
  std::mt19937_64 rng(1);
  const auto v = random_nodes(c, rng, 60);
  EXPECT_EQ(fill_distance(c, v, v), 0.0);
}

TEST(FillDistance, AddingNodesNeverIncreasesIt) {
  const Chart c = Chart::sphere_cap();
  std::mt19937_64 rng(2);
  const auto probes = probe_grid(c, 60);
  std::vector<Vec2> nodes = random_nodes(c, rng, 5);
  double prev = fill_distance(c, nodes, probes);
  for (int i = 0; i < 100; ++i) {
    nodes.push_back(oracle::random_in_chart(c, rng));
    const double f = fill_distance(c, nodes, probes);
    EXPECT_LE(f, prev);
    prev = f;
  }
}

TEST(FillDistance, UsesTheGeodesicMetric) {
  // radius 2 doubles angular distances, so the parameter-space answer would differ
  const Chart c = Chart::cylinder(2.0);
  std::mt19937_64 rng(3);
  const auto nodes = random_nodes(c, rng, 40);
  const auto probes = probe_grid(c, 50);
  const double fill = fill_distance(c, nodes, probes);
  EXPECT_DOUBLE_EQ(fill, brute_fill(distance_function(c), nodes, probes));
  const DistanceFn flat = [](const Vec2& a, const Vec2& b) { return (a - b).norm(); };
  EXPECT_GT(std::abs(fill - brute_fill(flat, nodes, probes)), 1e-3);
}

TEST(FillDistance, MatchesBruteForce) {
  std::mt19937_64 rng(4);
  int instances = 0;
  for (const Chart& c : {Chart::sphere_cap(), Chart::cylinder(), Chart::cone()}) {
    for (int t = 0; t < 40; ++t) {
      const auto nodes = random_nodes(c, rng, 5 + t * 3);
      const auto probes = random_nodes(c, rng, 200);
      const CellIndex index(c, nodes, distance_function(c));
      EXPECT_EQ(fill_distance(index, probes), brute_fill(distance_function(c), nodes, probes));
      ++instances;
    }
  }
  EXPECT_GE(instances, 100);
}

TEST(SeparationDistance, TwoNodesAQuarterTurnApart) {
  // (1,0,0)-ish and (0,1,0)-ish are outside the cap, so use the spherical chart
  const Chart c = Chart::sphere_spherical();
  const std::vector<Vec2> v{Vec2(pi / 2, 0), Vec2(pi / 2, pi / 2)};
  EXPECT_NEAR(separation_distance(c, v), pi / 4, 1e-15);
}

TEST(SeparationDistance, Errors) {
  const Chart c = Chart::sphere_cap();
  EXPECT_THROW(separation_distance(c, std::vector<Vec2>{Vec2(0, 0)}), DegenerateSet);
  EXPECT_THROW(separation_distance(c, std::vector<Vec2>{Vec2(0.1, 0), Vec2(0.1, 0)}), DegenerateSet);
  EXPECT_THROW(fill_distance(c, std::vector<Vec2>{}, std::vector<Vec2>{Vec2(0, 0)}), DegenerateSet);
}

TEST(SeparationDistance, MatchesBruteForceAndIsPermutationInvariant) {
  std::mt19937_64 rng(5);
  int instances = 0;
  for (const Chart& c : {Chart::sphere_cap(), Chart::cylinder(), Chart::cone()}) {
    for (int t = 0; t < 40; ++t) {
      auto nodes = random_nodes(c, rng, 100);
      const double s = separation_distance(c, nodes);
      EXPECT_EQ(s, brute_separation(distance_function(c), nodes));
      std::shuffle(nodes.begin(), nodes.end(), rng);
      EXPECT_EQ(separation_distance(c, nodes), s);
      ++instances;
    }
  }
  EXPECT_GE(instances, 100);
}

TEST(SeparationDistance, NoLargerThanFillForHaltonSets) {
  for (const Chart& c : {Chart::sphere_cap(), Chart::cylinder(), Chart::cone()}) {
    const auto v = local_coordinates(nodes_on_surface(c, 300));
    const CellIndex index(c, v, distance_function(c));
    const PointSetStats s = point_set_stats(index, probe_grid(c, 100));
    EXPECT_LE(s.separation, s.fill);
    EXPECT_GT(s.separation, 0.0);
    EXPECT_EQ(s.n, 300u);
  }
}

TEST(CellIndex, EveryNodeInExactlyOneCell) {
  const Chart c = Chart::sphere_cap();
  const auto v = local_coordinates(nodes_on_surface(c, 500));
  const CellIndex index(c, v, distance_function(c));
  std::vector<int> count(v.size(), 0);
  for (std::size_t cell = 0; cell < index.cell_count(); ++cell) {
    for (int id : index.cell(cell)) ++count[id];
  }
  for (int x : count) EXPECT_EQ(x, 1);
}

TEST(NeighborsWithin, HugeRadiusReturnsEveryNode) {
  const Chart c = Chart::cone();
  const auto v = local_coordinates(nodes_on_surface(c, 300));
  const CellIndex index(c, v, distance_function(c));
  EXPECT_EQ(neighbors_within(index, v[17], 100.0).size(), v.size());
}

TEST(NeighborsWithin, TinyRadiusAtANodeReturnsThatNode) {
  const Chart c = Chart::sphere_cap();
  const auto v = local_coordinates(nodes_on_surface(c, 300));
  const CellIndex index(c, v, distance_function(c));
  const double sep = separation_distance(index);
  for (int j : {0, 5, 123, 299}) {
    EXPECT_EQ(neighbors_within(index, v[j], sep), std::vector<int>{j});
  }
}

TEST(NeighborsWithin, MatchesLinearScan) {
  std::mt19937_64 rng(6);
  int instances = 0;
  for (const Chart& c : {Chart::sphere_cap(), Chart::cylinder(), Chart::cone()}) {
    const auto v = local_coordinates(nodes_on_surface(c, 2000));
    const DistanceFn d = distance_function(c);
    for (double cell : {0.0, 0.01, 0.2}) {
      const CellIndex index(c, v, d, cell);
      std::uniform_real_distribution<double> radius(0.001, 0.5);
      for (int q = 0; q < 40; ++q) {
        const Vec2 u = oracle::random_in_chart(c, rng);
        const double r = radius(rng);
        std::vector<int> expected;
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (d(u, v[i]) < r) expected.push_back(static_cast<int>(i));
        }
        EXPECT_EQ(neighbors_within(index, u, r), expected);
        ++instances;
      }
    }
  }
  EXPECT_GE(instances, 100);
}

TEST(CellIndex, NearestMatchesSorting) {
  std::mt19937_64 rng(7);
  const Chart c = Chart::cylinder();
  const auto v = local_coordinates(nodes_on_surface(c, 400));
  const DistanceFn d = distance_function(c);
  const CellIndex index(c, v, d);
  for (int q = 0; q < 100; ++q) {
    const Vec2 u = oracle::random_in_chart(c, rng);
    std::vector<std::pair<double, int>> all;
    for (std::size_t i = 0; i < v.size(); ++i) all.emplace_back(d(u, v[i]), static_cast<int>(i));
    std::sort(all.begin(), all.end());
    const auto hits = index.nearest(u, 12);
    ASSERT_EQ(hits.size(), 12u);
    for (int k = 0; k < 12; ++k) {
      EXPECT_EQ(hits[k].first, all[k].second);
      EXPECT_EQ(hits[k].second, all[k].first);
    }
  }
}

TEST(CellIndex, RejectsNodesOffTheChart) {
  const Chart c = Chart::sphere_cap();
  EXPECT_THROW(CellIndex(c, {Vec2(0.9, 0.9)}, distance_function(c)), OutOfChart);
}
