#include "hbsurf/interpolant.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "hbsurf/errors.hpp"

namespace hbsurf {

namespace {

constexpr std::array<double, kMaxTaylorOrder + 1> kFactorial = {1.0, 1.0, 2.0, 6.0, 24.0};

double int_pow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// (v - z)^beta / beta!
double monomial(const Vec2& offset, MultiIndex beta) {
  if (beta.b1 < 0 || beta.b2 < 0 || beta.b1 > kMaxTaylorOrder || beta.b2 > kMaxTaylorOrder) {
    throw InvalidConfig("multi-index outside the supported range");
  }
  return int_pow(offset.x(), beta.b1) * int_pow(offset.y(), beta.b2) /
         (kFactorial[beta.b1] * kFactorial[beta.b2]);
}

void check_distances(std::span<const SampleSite> samples, const EvalPoint& u) {
  if (u.distances.size() != samples.size()) {
    throw InvalidConfig("evaluation point needs one distance per sample");
  }
}

}  // namespace

int SampleSite::complete_order() const {
  if (!data.contains({0, 0})) return -1;
  int m = 0;
  for (int order = 1; order <= kMaxTaylorOrder; ++order) {
    for (int b1 = order; b1 >= 0; --b1) {
      if (!data.contains({b1, order - b1})) return m;
    }
    m = order;
  }
  return m;
}

int SampleSite::max_order() const {
  int k = 0;
  for (const auto& [beta, value] : data) k = std::max(k, beta.order());
  return k;
}

InterpolantConfig InterpolantConfig::for_samples(std::span<const SampleSite> samples,
                                                 BasisConfig basis) {
  if (samples.empty()) throw InvalidConfig("no samples");
  InterpolantConfig c;
  c.q = std::numeric_limits<int>::max();
  for (const auto& s : samples) {
    const int complete = s.complete_order();
    if (complete < 0) throw InvalidConfig("every sample needs a function value");
    if (s.max_order() > kMaxTaylorOrder) throw InvalidConfig("derivative order above 4");
    c.k = std::max(c.k, s.max_order());
    c.q = std::min(c.q, complete);
  }
  basis.k = c.k;
  basis.validate();
  c.basis = basis;
  return c;
}

double taylor_eval(const SampleSite& site, const Vec2& v) {
  const Vec2 offset = v - site.v;
  double sum = 0.0;
  for (const auto& [beta, value] : site.data) sum += value * monomial(offset, beta);
  return sum;
}

double hb_eval(std::span<const SampleSite> samples, const InterpolantConfig& config,
               const EvalPoint& u) {
  check_distances(samples, u);
  const std::vector<double> w = cardinal_weights(config.basis, u.distances);
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (w[i] != 0.0) sum += taylor_eval(samples[i], u.v) * w[i];
  }
  return sum;
}

double hb_eval_basis_form(std::span<const SampleSite> samples, const InterpolantConfig& config,
                          const EvalPoint& u) {
  check_distances(samples, u);
  const std::vector<double> w = cardinal_weights(config.basis, u.distances);
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Vec2 offset = u.v - samples[i].v;
    for (const auto& [beta, value] : samples[i].data) {
      const double g_i_beta = monomial(offset, beta) * w[i];
      sum += value * g_i_beta;
    }
  }
  return sum;
}

HermiteInterpolant::HermiteInterpolant(Chart chart, std::vector<SampleSite> samples,
                                       BasisConfig basis, DistanceFn distance)
    : samples_(std::move(samples)),
      config_(InterpolantConfig::for_samples(samples_, basis)),
      index_(chart,
             [&] {
               std::vector<Vec2> v;
               v.reserve(samples_.size());
               for (const auto& s : samples_) v.push_back(s.v);
               return v;
             }(),
             distance ? std::move(distance) : distance_function(chart)) {}

std::vector<StencilEntry> HermiteInterpolant::stencil(const Vec2& v) const {
  std::vector<StencilEntry> entries;
  std::vector<double> distances;
  if (config_.basis.tau_kind == TauKind::None) {
    entries.reserve(samples_.size());
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      const double d = index_.distance()(v, samples_[i].v);
      entries.push_back({i, d, 0.0});
      distances.push_back(d);
    }
  } else {
    for (const auto& [id, d] : index_.within(v, config_.basis.delta)) {
      entries.push_back({static_cast<std::size_t>(id), d, 0.0});
      distances.push_back(d);
    }
    if (entries.empty()) {
      throw EmptyStencil("no node within delta = " + std::to_string(config_.basis.delta) +
                         " of the evaluation point");
    }
  }
  const std::vector<double> w = cardinal_weights(config_.basis, distances);
  for (std::size_t i = 0; i < entries.size(); ++i) entries[i].weight = w[i];
  return entries;
}

double HermiteInterpolant::operator()(const Vec2& v) const {
  double sum = 0.0;
  for (const auto& e : stencil(v)) {
    if (e.weight != 0.0) sum += taylor_eval(samples_[e.sample], v) * e.weight;
  }
  return sum;
}

double HermiteInterpolant::evaluate_basis_form(const Vec2& v) const {
  double sum = 0.0;
  for (const auto& e : stencil(v)) {
    const Vec2 offset = v - samples_[e.sample].v;
    for (const auto& [beta, value] : samples_[e.sample].data) {
      sum += value * (monomial(offset, beta) * e.weight);
    }
  }
  return sum;
}

double derivative_match_check(const HermiteInterpolant& interpolant, int max_order) {
  if (max_order < 0 || max_order > 2) throw InvalidConfig("derivative checks cover orders 0..2");
  const Chart& chart = interpolant.chart();
  const auto& samples = interpolant.samples();
  double worst = 0.0;
  for (const auto& site : samples) {
    double spacing = 1.0;
    if (samples.size() > 1) spacing = interpolant.index().nearest(site.v, 2).back().second;
    const double h = 1e-4 * spacing;
    const bool room = chart.contains(site.v + Vec2(h, h), 0.0) &&
                      chart.contains(site.v - Vec2(h, h), 0.0) &&
                      chart.contains(site.v + Vec2(h, -h), 0.0) &&
                      chart.contains(site.v + Vec2(-h, h), 0.0);
    for (const auto& [beta, value] : site.data) {
      if (beta.order() > max_order) continue;
      if (beta.order() > 0 && !room) continue;
      const double estimate = finite_difference(interpolant, site.v, beta, h);
      worst = std::max(worst, std::abs(estimate - value));
    }
  }
  return worst;
}

}  // namespace hbsurf
