#pragma once

#include <optional>
#include <vector>

#include "altroute/dynamics.hpp"
#include "altroute/equilibrium.hpp"
#include "altroute/network.hpp"

namespace altroute {

struct MetricsOptions {
  /// Grid spacing for the brute-force equilibrium search (n <= 3); 0 disables it.
  double grid_step = 1e-2;
  double eps_eq = kEpsEq;
  DynamicsOptions dynamics = [] {
    DynamicsOptions o;
    o.record_trace = false;
    return o;
  }();
};

struct PoaReport {
  double worst_ne_total_cost = 0.0;
  double opt_total_cost = 0.0;
  double poa = 0.0;
  /// 1 + (r - x*) c / (r L) at the symmetric selfish equilibrium x*.
  std::optional<double> closed_form_poa;
  bool formula_agrees = false;
  int equilibria_considered = 0;
};

/// Worst verified selfish equilibrium (closed form plus refined grid-oracle
/// candidates) over the social optimum. Throws RegimeError outside the
/// elbow/constant-cross regime.
PoaReport price_of_anarchy(const LbNetwork& net, const MetricsOptions& opts = {});

struct WardropPoaReport {
  double wardrop_total_cost = 0.0;
  double opt_total_cost = 0.0;
  double poa = 0.0;
  bool local_only = false;
};

WardropPoaReport wardrop_price_of_anarchy(const LbNetwork& net);

struct VouReport {
  double selfish_best_cost = 0.0;
  double altruistic_best_cost = 0.0;
  double vou = 0.0;
  double beta_at_best = 0.0;
  std::vector<double> best_profile;
  /// (rL + (r/2 - zeta) c) / (2 r L); two-player elbow regime only.
  std::optional<double> paper_lower_bound;
  /// False when no altruistic equilibrium was verified at any beta.
  bool available = false;
  int equilibria_considered = 0;
};

/// k/101 for k = 1..101 plus 1/n + 1e-6 and (n-1)/n + 1e-6, sorted.
std::vector<double> default_beta_grid(int n);

/// 0.25, 0.5, 0.75, 1 plus the same two analytic candidates; for sweeps.
std::vector<double> compact_beta_grid(int n);

/// Player `player` altruistic with weight beta spread evenly over the others;
/// the infimum of its actual cost over verified equilibria found from
/// pure-local, the selfish equilibrium, the load-taker profile and (n <= 3)
/// refined grid-oracle candidates, for every beta in `beta_grid` (empty means
/// default_beta_grid).
VouReport value_of_unilateral_altruism(const LbNetwork& net, int player, std::vector<double> beta_grid = {},
                                       const MetricsOptions& opts = {});

struct SpilloverReport {
  bool applicable = false;
  double beta = 0.0;
  std::vector<double> profile;
  std::vector<double> selfish_costs;
  std::vector<double> altruistic_costs;
  std::vector<double> deltas;  // selfish minus altruistic, per player
  VerifyResult check;
};

/// Cost change of every player when `player` turns altruistic with weight
/// beta and play moves from the selfish equilibrium to the load-taker
/// profile. Not applicable when that profile fails verification.
SpilloverReport altruism_benefit_spillover(const LbNetwork& net, int player, double beta,
                                           double eps_eq = kEpsEq);

struct SweepRow {
  int m = 0;
  double delta = 0.0;
  double cross_cost = 0.0;
  double zeta = 0.0;
  PoaReport poa;
  WardropPoaReport wardrop;
  VouReport vou;
};

/// PoA, Wardrop PoA and VoU of `player` for each m in [m_from, m_to].
std::vector<SweepRow> sweep_sequence(const ParamSequence& seq, int m_from, int m_to, int n,
                                     const std::vector<double>& beta_grid, const MetricsOptions& opts = {},
                                     int player = 0);

}  // namespace altroute
