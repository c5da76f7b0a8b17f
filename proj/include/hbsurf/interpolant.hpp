#ifndef HBSURF_INTERPOLANT_HPP
#define HBSURF_INTERPOLANT_HPP

#include <map>
#include <span>
#include <vector>

#include "hbsurf/basis.hpp"
#include "hbsurf/geodesics.hpp"
#include "hbsurf/geometry.hpp"
#include "hbsurf/pointsets.hpp"

namespace hbsurf {

/// Derivative multi-index beta = (b1, b2), ordered graded-lexicographically:
/// (0,0) (1,0) (0,1) (2,0) (1,1) (0,2) ...
struct MultiIndex {
  int b1 = 0;
  int b2 = 0;

  int order() const { return b1 + b2; }
  bool operator==(const MultiIndex&) const = default;
  bool operator<(const MultiIndex& o) const {
    return order() != o.order() ? order() < o.order() : b1 > o.b1;
  }
};

inline constexpr int kMaxTaylorOrder = 4;

/// The six multi-indices of order <= 2 in graded lexicographic order (CSV column order).
inline constexpr MultiIndex kOrderTwoIndices[6] = {{0, 0}, {1, 0}, {0, 1},
                                                   {2, 0}, {1, 1}, {0, 2}};

/// A node with its local coordinates and the derivative values f_{i,beta} known there;
/// the key set of data is the node's index set Delta_i.
struct SampleSite {
  int id = 0;
  Vec2 v = Vec2::Zero();
  Vec3 ambient = Vec3::Zero();
  std::map<MultiIndex, double> data;

  /// Largest m such that every multi-index of order <= m is present (-1 without a value).
  int complete_order() const;
  int max_order() const;
};

struct InterpolantConfig {
  BasisConfig basis;
  int k = 0;
  int q = 0;

  /// k and q read off the samples; basis.k is set to k.
  static InterpolantConfig for_samples(std::span<const SampleSite> samples, BasisConfig basis);
};

/// Incomplete Taylor expansion of the site's data, evaluated at v.
double taylor_eval(const SampleSite& site, const Vec2& v);

/// An evaluation point: local coordinates and the geodesic distance to each sample.
struct EvalPoint {
  Vec2 v = Vec2::Zero();
  std::vector<double> distances;
};

/// H(u) = sum_i T(u; f, z_i, Delta_i) g_i(u) over the given samples.
double hb_eval(std::span<const SampleSite> samples, const InterpolantConfig& config,
               const EvalPoint& u);

/// H(u) = sum_i sum_{beta in Delta_i} f_{i,beta} g_{i,beta}(u).
double hb_eval_basis_form(std::span<const SampleSite> samples, const InterpolantConfig& config,
                          const EvalPoint& u);

/// One contribution to H(u): sample index, its distance, and its cardinal weight.
struct StencilEntry {
  std::size_t sample = 0;
  double distance = 0.0;
  double weight = 0.0;
};

/// Hermite-Birkhoff interpolant on one chart. Localized configurations gather their
/// stencil through a cell index built once at construction; evaluation is read-only.
class HermiteInterpolant {
 public:
  HermiteInterpolant(Chart chart, std::vector<SampleSite> samples, BasisConfig basis,
                     DistanceFn distance = {});

  double operator()(const Vec2& v) const;
  double evaluate_basis_form(const Vec2& v) const;
  std::vector<StencilEntry> stencil(const Vec2& v) const;

  const Chart& chart() const { return index_.chart(); }
  const std::vector<SampleSite>& samples() const { return samples_; }
  const InterpolantConfig& config() const { return config_; }
  const CellIndex& index() const { return index_; }

 private:
  std::vector<SampleSite> samples_;
  InterpolantConfig config_;
  CellIndex index_;
};

/// Largest |D^beta H(z_i) - f_{i,beta}| over nodes and beta in Delta_i with |beta| <= max_order,
/// derivatives of H by central differences with step 1e-4 times the node's nearest-neighbour
/// distance.
double derivative_match_check(const HermiteInterpolant& interpolant, int max_order);

/// Central finite-difference estimate of D^beta F at v for |beta| <= 2.
template <typename F>
double finite_difference(const F& fn, const Vec2& v, MultiIndex beta, double h) {
  const Vec2 e1{h, 0.0};
  const Vec2 e2{0.0, h};
  switch (beta.order()) {
    case 0:
      return fn(v);
    case 1: {
      const Vec2 e = beta.b1 == 1 ? e1 : e2;
      return (fn(Vec2(v + e)) - fn(Vec2(v - e))) / (2.0 * h);
    }
    default:
      break;
  }
  if (beta.b1 == 1) {
    return (fn(Vec2(v + e1 + e2)) - fn(Vec2(v + e1 - e2)) - fn(Vec2(v - e1 + e2)) +
            fn(Vec2(v - e1 - e2))) /
           (4.0 * h * h);
  }
  const Vec2 e = beta.b1 == 2 ? e1 : e2;
  return (fn(Vec2(v + e)) - 2.0 * fn(v) + fn(Vec2(v - e))) / (h * h);
}

}  // namespace hbsurf

#endif  // HBSURF_INTERPOLANT_HPP
