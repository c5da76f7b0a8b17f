#include "hbsurf/basis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hbsurf/errors.hpp"

namespace hbsurf {

AlphaKind parse_alpha_kind(std::string_view name) {
  if (name == "power") return AlphaKind::Power;
  if (name == "exp_over_power") return AlphaKind::ExpOverPower;
  if (name == "pure_exp") return AlphaKind::PureExp;
  throw InvalidConfig("unknown alpha kind: " + std::string(name));
}

TauKind parse_tau_kind(std::string_view name) {
  if (name == "wendland") return TauKind::Wendland;
  if (name == "indicator") return TauKind::Indicator;
  if (name == "none") return TauKind::None;
  throw InvalidConfig("unknown tau kind: " + std::string(name));
}

std::string_view to_string(AlphaKind kind) {
  switch (kind) {
    case AlphaKind::Power:
      return "power";
    case AlphaKind::ExpOverPower:
      return "exp_over_power";
    case AlphaKind::PureExp:
      return "pure_exp";
  }
  return "power";
}

std::string_view to_string(TauKind kind) {
  switch (kind) {
    case TauKind::Wendland:
      return "wendland";
    case TauKind::Indicator:
      return "indicator";
    case TauKind::None:
      return "none";
  }
  return "none";
}

BasisConfig BasisConfig::defaults(int k, double delta) {
  BasisConfig c;
  c.k = k;
  c.mu = k + 1.0;
  c.delta = delta;
  return c;
}

void BasisConfig::validate() const {
  if (k < 0) throw InvalidConfig("smoothness order k must be >= 0");
  if (!(mu >= k)) throw InvalidConfig("exponent mu must be >= k");
  if (!(mu > 0.0)) throw InvalidConfig("exponent mu must be positive");
  if (alpha_kind == AlphaKind::ExpOverPower && !(gamma > 0.0)) {
    throw InvalidConfig("gamma must be positive");
  }
  if (alpha_kind == AlphaKind::PureExp && !(delta_exp >= 0.0)) {
    throw InvalidConfig("delta_exp must be non-negative");
  }
  if (tau_kind != TauKind::None && !(delta > 0.0)) {
    throw InvalidConfig("localization radius delta must be positive");
  }
  if (!(node_epsilon >= 0.0)) throw InvalidConfig("node_epsilon must be non-negative");
}

double alpha(const BasisConfig& config, double distance) {
  const double p = std::pow(distance, config.mu);
  switch (config.alpha_kind) {
    case AlphaKind::Power:
      return p;
    case AlphaKind::ExpOverPower:
      return p * std::exp(config.gamma * p);
    case AlphaKind::PureExp:
      return std::exp(config.delta_exp * p);
  }
  return p;
}

double tau(const BasisConfig& config, double distance) {
  switch (config.tau_kind) {
    case TauKind::Wendland: {
      const double t = 1.0 - distance / config.delta;
      return t > 0.0 ? std::pow(t, config.k + 1) : 0.0;
    }
    case TauKind::Indicator:
      return distance < config.delta ? 1.0 : 0.0;
    case TauKind::None:
      return 1.0;
  }
  return 1.0;
}

void cardinal_weights(const BasisConfig& config, std::span<const double> distances,
                      std::span<double> weights) {
  const std::size_t n = distances.size();
  if (weights.size() != n) throw InvalidConfig("weight buffer size mismatch");
  if (n == 0) throw EmptyStencil("no nodes");

  const auto nearest = std::min_element(distances.begin(), distances.end());
  const std::size_t jmin = static_cast<std::size_t>(nearest - distances.begin());
  const double dmin = *nearest;
  if (dmin < config.node_epsilon) {
    std::fill(weights.begin(), weights.end(), 0.0);
    weights[jmin] = 1.0;
    return;
  }

  // reciprocal alpha scaled by the nearest node's reciprocal keeps every term <= tau_i
  const double pmin = std::pow(dmin, config.mu);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = tau(config, distances[i]);
    double w = 0.0;
    if (t > 0.0) {
      switch (config.alpha_kind) {
        case AlphaKind::Power:
          w = t * std::pow(dmin / distances[i], config.mu);
          break;
        case AlphaKind::ExpOverPower: {
          const double p = std::pow(distances[i], config.mu);
          w = t * std::pow(dmin / distances[i], config.mu) * std::exp(-config.gamma * (p - pmin));
          break;
        }
        case AlphaKind::PureExp: {
          const double p = std::pow(distances[i], config.mu);
          w = t * std::exp(-config.delta_exp * (p - pmin));
          break;
        }
      }
    }
    weights[i] = w;
    sum += w;
  }
  if (!(sum > 0.0)) {
    throw EmptyStencil("no node within the localization radius " + std::to_string(config.delta));
  }
  for (double& w : weights) w /= sum;
}

std::vector<double> cardinal_weights(const BasisConfig& config,
                                     std::span<const double> distances) {
  std::vector<double> weights(distances.size());
  cardinal_weights(config, distances, weights);
  return weights;
}

}  // namespace hbsurf
