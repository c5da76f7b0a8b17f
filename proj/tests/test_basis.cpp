#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "hbsurf/basis.hpp"
#include "hbsurf/errors.hpp"
#include "hbsurf/geodesics.hpp"
#include "hbsurf/interpolant.hpp"
#include "hbsurf/pointsets.hpp"
#include "oracles.hpp"

using namespace hbsurf;

namespace {

BasisConfig power(double mu, TauKind tau = TauKind::None, double delta = 1.0, int k = 0) {
  BasisConfig c;
  c.mu = mu;
  c.k = k;
  c.tau_kind = tau;
  c.delta = delta;
  return c;
}

std::vector<double> random_distances(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(1e-6, 2.0);
  std::vector<double> d(n);
  for (double& x : d) x = u(rng);
  return d;
}

}  // namespace

TEST(Alpha, PowerExamples) {
  EXPECT_EQ(alpha(power(3), 2.0), 8.0);
  EXPECT_EQ(alpha(power(3), 0.0), 0.0);
}

TEST(Alpha, PowerIsPositiveAndIncreasing) {
  double prev = 0.0;
  for (int i = 1; i < 100; ++i) {
    const double a = alpha(power(2.5), 0.03 * i);
    EXPECT_GT(a, prev);
    prev = a;
  }
}

TEST(Alpha, ExponentialVariants) {
  BasisConfig c = power(2);
  c.alpha_kind = AlphaKind::ExpOverPower;
  c.gamma = 0.5;
  EXPECT_NEAR(alpha(c, 2.0), 4.0 * std::exp(2.0), 1e-12);
  c.alpha_kind = AlphaKind::PureExp;
  c.delta_exp = 0.25;
  EXPECT_NEAR(alpha(c, 2.0), std::exp(1.0), 1e-15);
}

TEST(Alpha, ZonalEquivalenceOnTheSphere) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  for (int i = 0; i < 100; ++i) {
    const Vec3 u = Vec3(n(rng), n(rng), n(rng)).normalized();
    const Vec3 w = Vec3(n(rng), n(rng), n(rng)).normalized();
    const double dg = sphere_distance(u, w);
    const double via_chord =
        euclid_geodesic_convert((u - w).norm(), ConvertDirection::ToGeodesic);
    EXPECT_NEAR(alpha(power(3), dg), alpha(power(3), via_chord), 1e-14 * std::max(1.0, alpha(power(3), dg)) * 10);
  }
}

TEST(Tau, WendlandExamples) {
  const BasisConfig c = power(3, TauKind::Wendland, 0.4, 2);
  EXPECT_EQ(tau(c, 0.0), 1.0);
  EXPECT_EQ(tau(c, 0.4), 0.0);
  EXPECT_EQ(tau(c, 0.5), 0.0);
  EXPECT_NEAR(tau(c, 0.2), 0.125, 1e-15);
}

TEST(Tau, IndicatorAndNone) {
  const BasisConfig ind = power(1, TauKind::Indicator, 0.4);
  EXPECT_EQ(tau(ind, 0.39), 1.0);
  EXPECT_EQ(tau(ind, 0.4), 0.0);
  EXPECT_EQ(tau(power(1), 100.0), 1.0);
}

TEST(CardinalWeights, Examples) {
  const std::vector<double> two{0.7, 0.7};
  const auto w2 = cardinal_weights(power(2), two);
  EXPECT_EQ(w2[0], 0.5);
  EXPECT_EQ(w2[1], 0.5);

  const std::vector<double> at_node{0.3, 0.0, 0.9};
  EXPECT_EQ(cardinal_weights(power(2), at_node), (std::vector<double>{0, 1, 0}));

  const std::vector<double> three{1, 2, 4};
  const auto w3 = cardinal_weights(power(2), three);
  EXPECT_NEAR(w3[0], 16.0 / 21, 1e-15);
  EXPECT_NEAR(w3[1], 4.0 / 21, 1e-15);
  EXPECT_NEAR(w3[2], 1.0 / 21, 1e-15);
}

TEST(CardinalWeights, EmptyStencil) {
  const std::vector<double> far{0.5, 0.8};
  EXPECT_THROW(cardinal_weights(power(1, TauKind::Wendland, 0.4), far), EmptyStencil);
  EXPECT_THROW(cardinal_weights(power(1), std::vector<double>{}), EmptyStencil);
}

TEST(CardinalWeights, PartitionOfUnityAndRange) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + trial % 40;
    const auto d = random_distances(rng, n);
    BasisConfig c = power(0.5 + trial % 4, trial % 3 == 0 ? TauKind::None : TauKind::Wendland,
                          3.0, trial % 3);
    if (trial % 5 == 0) {
      c.alpha_kind = AlphaKind::ExpOverPower;
      c.gamma = 2.0;
    }
    if (trial % 7 == 0) {
      c.alpha_kind = AlphaKind::PureExp;
      c.delta_exp = 1.5;
    }
    const auto w = cardinal_weights(c, d);
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
    for (double x : w) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
  }
}

TEST(CardinalWeights, LocalizedWeightsVanishOutsideTheRadius) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto d = random_distances(rng, 30);
    d[0] = 0.1;
    const BasisConfig c = power(2, trial % 2 ? TauKind::Wendland : TauKind::Indicator, 0.6, 1);
    const auto w = cardinal_weights(c, d);
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] >= 0.6) EXPECT_EQ(w[i], 0.0);
    }
  }
}

TEST(CardinalWeights, CardinalityAtNodes) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    auto d = random_distances(rng, 25);
    const std::size_t j = trial % 25;
    d[j] = trial % 2 ? 0.0 : 5e-13;
    const auto w = cardinal_weights(power(3, TauKind::Wendland, 2.5, 2), d);
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(w[i], i == j ? 1.0 : 0.0);
  }
}

TEST(CardinalWeights, NearNodeWeightsStayFinite) {
  const std::vector<double> d{1e-11, 0.5, 0.7};
  const auto w = cardinal_weights(power(3), d);
  EXPECT_NEAR(w[0], 1.0, 1e-28);
  for (double x : w) EXPECT_TRUE(std::isfinite(x));
}

TEST(CardinalWeights, LocalizationIsBitIdentical) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto d = random_distances(rng, 20);
    const BasisConfig c = power(3, TauKind::Wendland, 1.0, 2);
    const auto before = cardinal_weights(c, d);
    // move every far node to some other far distance
    std::uniform_real_distribution<double> far(1.0, 3.0);
    for (double& x : d) {
      if (x >= 1.0) x = far(rng);
    }
    EXPECT_EQ(cardinal_weights(c, d), before);
  }
}

TEST(CardinalWeights, SpanOverloadMatches) {
  const std::vector<double> d{0.2, 0.5, 0.9};
  std::vector<double> out(3);
  cardinal_weights(power(2), d, out);
  EXPECT_EQ(out, cardinal_weights(power(2), d));
  std::vector<double> wrong(2);
  EXPECT_THROW(cardinal_weights(power(2), d, wrong), InvalidConfig);
}

TEST(BasisConfig, Validation) {
  EXPECT_NO_THROW(BasisConfig::defaults(2, 0.3).validate());
  EXPECT_EQ(BasisConfig::defaults(2, 0.3).mu, 3.0);
  BasisConfig c = BasisConfig::defaults(2, 0.3);
  c.mu = 1.5;
  EXPECT_THROW(c.validate(), InvalidConfig);
  c = BasisConfig::defaults(0, 0.0);
  EXPECT_THROW(c.validate(), InvalidConfig);
  c.tau_kind = TauKind::None;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(parse_tau_kind("wendland"), TauKind::Wendland);
  EXPECT_EQ(parse_alpha_kind("exp_over_power"), AlphaKind::ExpOverPower);
  EXPECT_THROW(parse_alpha_kind("gaussian"), InvalidConfig);
  EXPECT_EQ(to_string(TauKind::Indicator), "indicator");
}

// Derivatives of the cardinal functions at nodes, measured in coordinates scaled by the
// node separation. The step is 1e-3 in those coordinates. At a node the weights behave
// like |v|^mu, whose second difference carries an O(h) term, so two step sizes are
// combined to cancel it.
TEST(CardinalWeights, DerivativesVanishAtNodes) {
  const Chart chart = Chart::sphere_cap();
  const DistanceFn dist = distance_function(chart);
  int instances = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int k = 1 + trial % 2;
    const auto nodes = nodes_on_surface(chart, 30, 97 * trial);
    std::vector<Vec2> v;
    for (const auto& p : nodes) v.push_back(p.v);
    const double sep = separation_distance(chart, v);
    const BasisConfig c = power(k + 1, TauKind::Wendland, 0.6, k);

    for (std::size_t j = 0; j < v.size(); j += 7) {
      auto weights_at = [&](const Vec2& u) {
        std::vector<double> d;
        for (const Vec2& z : v) d.push_back(dist(u, z));
        return cardinal_weights(c, d);
      };
      const double h = 1e-3 * sep;
      for (const MultiIndex beta : kOrderTwoIndices) {
        if (beta.order() < 1 || beta.order() > k) continue;
        for (std::size_t i = 0; i < v.size(); ++i) {
          auto g = [&](const Vec2& u) { return weights_at(u)[i]; };
          const double scale = std::pow(sep, beta.order());
          const double coarse = finite_difference(g, v[j], beta, h) * scale;
          const double fine = finite_difference(g, v[j], beta, h / 2) * scale;
          EXPECT_LT(std::abs(2 * fine - coarse), 1e-4)
              << "k=" << k << " node " << j << " weight " << i << " beta (" << beta.b1 << ","
              << beta.b2 << ")";
        }
      }
      ++instances;
    }
  }
  EXPECT_GE(instances, 100);
}
