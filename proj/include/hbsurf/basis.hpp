#ifndef HBSURF_BASIS_HPP
#define HBSURF_BASIS_HPP

#include <span>
#include <string_view>
#include <vector>

namespace hbsurf {

/// Distance profile alpha(d) whose reciprocal weights the nodes.
///   Power         alpha = d^mu
///   ExpOverPower  alpha = d^mu exp(gamma d^mu)   (weight exp(-gamma d^mu) / d^mu)
///   PureExp       alpha = exp(delta_exp d^mu)     (weight exp(-delta_exp d^mu), not cardinal)
enum class AlphaKind { Power, ExpOverPower, PureExp };

/// Localizer tau(d): Wendland-style (1 - d/delta)_+^(k+1), indicator of d < delta, or none.
enum class TauKind { Wendland, Indicator, None };

AlphaKind parse_alpha_kind(std::string_view name);
TauKind parse_tau_kind(std::string_view name);
std::string_view to_string(AlphaKind kind);
std::string_view to_string(TauKind kind);

struct BasisConfig {
  AlphaKind alpha_kind = AlphaKind::Power;
  double mu = 1.0;
  double gamma = 1.0;
  double delta_exp = 0.0;
  int k = 0;
  TauKind tau_kind = TauKind::Wendland;
  double delta = 1.0;
  double node_epsilon = 1e-12;

  /// Power profile with mu = k + 1 and Wendland localization.
  static BasisConfig defaults(int k, double delta);

  void validate() const;
};

double alpha(const BasisConfig& config, double distance);
double tau(const BasisConfig& config, double distance);

/// Cardinal weights g_i(u) from the distances of u to every node, evaluated in barycentric
/// form with the reciprocals normalized by the nearest node. Returns the Kronecker vector
/// when u is within node_epsilon of a node. Throws EmptyStencil when localization leaves
/// no node in range.
std::vector<double> cardinal_weights(const BasisConfig& config, std::span<const double> distances);

/// Same as cardinal_weights, writing into a caller-owned buffer.
void cardinal_weights(const BasisConfig& config, std::span<const double> distances,
                      std::span<double> weights);

}  // namespace hbsurf

#endif  // HBSURF_BASIS_HPP
