#pragma once

#include <span>
#include <vector>

#include "altroute/doc_matrix.hpp"
#include "altroute/game.hpp"
#include "altroute/network.hpp"

namespace altroute {

/// Parameters of an LB network in the elbow/constant-cross regime:
/// local Elbow{L, delta, r, 0} and cross Affine{0, c} with c > L > delta > 0
/// and c < r*L/delta.
struct ElbowRegime {
  double demand = 0.0;
  double height = 0.0;
  double width = 0.0;
  double cross_cost = 0.0;

  double slope() const { return height / width; }
  /// zeta = (1/2) * c / (L/delta)
  double zeta() const { return 0.5 * cross_cost / slope(); }
};

/// Throws RegimeError (naming the violated inequality) when `net` is not in
/// the elbow/constant-cross regime.
ElbowRegime elbow_regime(const LbNetwork& net);
bool in_elbow_regime(const LbNetwork& net);

/// Symmetric selfish equilibrium local flow r/n + (n-1)c/(n g), g = L/delta.
/// Equals r/2 + zeta for two players.
double symmetric_selfish_local_flow(const LbNetwork& net);

/// Unique symmetric selfish Nash equilibrium in closed form; each player's
/// cost is r*L + (r - x)*c. Result is verified before returning.
EquilibriumResult closed_form_selfish_ne(const LbNetwork& net);

struct Deviation {
  int player = 0;
  double from = 0.0;
  double to = 0.0;
  double gain = 0.0;  // perceived-cost reduction
};

struct VerifyResult {
  bool pass = true;
  double max_gain = 0.0;
  /// Every player whose best response improves its perceived cost by more
  /// than eps_eq.
  std::vector<Deviation> deviations;
  explicit operator bool() const { return pass; }
};

VerifyResult verify_equilibrium(const LbNetwork& net, const DocMatrix& doc,
                                std::span<const double> local_flows, double eps_eq = kEpsEq);
VerifyResult verify_equilibrium(const LbNetwork& net, const DocMatrix& doc, const FlowProfile& x,
                                double eps_eq = kEpsEq);

/// Altruist takes its whole demand locally; every other player sheds just
/// enough that its local link sits at the elbow kink, r - (n-1)*delta
/// (r - delta for two players). Requires an elbow local latency.
std::vector<double> load_taker_profile(const LbNetwork& net, int altruist);

/// Extracts local flows from an equal-split profile; throws StructuralError
/// if the profile is infeasible or splits unevenly across cross links.
std::vector<double> equal_split_local_flows(const LbNetwork& net, const FlowProfile& x);

/// Strict monotonicity of each player's link marginal cost in own flow and
/// in total flow, sampled on the ascending part of the local latency (the
/// uniqueness condition for parallel-link reductions). `samples` random
/// (own, total) pairs per argument.
bool marginal_cost_strictly_increasing(const LbNetwork& net, int samples, unsigned long long seed);

}  // namespace altroute
