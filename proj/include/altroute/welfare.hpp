#pragma once

#include <span>
#include <string>
#include <vector>

#include "altroute/network.hpp"

namespace altroute {

inline constexpr double kEpsWardrop = 1e-9;

/// path_flows[i][j]: player i's flow on its local link (j == i) or on the
/// two-hop path through source j.
using PathFlows = std::vector<std::vector<double>>;

FlowProfile path_flow_profile(const LbNetwork& net, const PathFlows& y);

/// Sum over links of t_l * T_l(t_l).
double social_cost(const LbNetwork& net, const FlowProfile& x);

/// Euclidean projection of v onto {y >= 0, sum y = mass}.
std::vector<double> project_to_simplex(std::span<const double> v, double mass);

struct DescentOptions {
  int max_iter = 10'000;
  double initial_step = 0.1;  // multiples of r
};

struct DescentResult {
  PathFlows path_flows;
  double total_cost = 0.0;
  int iterations = 0;
};

/// Projected (sub)gradient descent of the social cost over the product of
/// per-player path simplices; right derivatives at latency kinks,
/// backtracking by halving from initial_step * r.
DescentResult projected_descent(const LbNetwork& net, PathFlows start, const DescentOptions& opts = {});

enum class OptimumMethod { ClosedForm, Numeric };
std::string to_string(OptimumMethod m);

struct SocialOutcome {
  FlowProfile flows;
  double total_cost = 0.0;
  std::vector<double> per_player;
  OptimumMethod method = OptimumMethod::ClosedForm;
  /// False when rerouting is free (zero cross latency): many flow profiles
  /// share the optimal cost.
  bool flows_unique = true;
  /// Reported cost minus the descent verifier's cost (<= 1e-8 by contract).
  double verifier_gap = 0.0;
};

/// Pure-local routing when cross links carry a positive constant latency,
/// checked by projected descent; otherwise the descent result, tagged
/// Numeric.
SocialOutcome social_optimum(const LbNetwork& net, const DescentOptions& opts = {});

struct WardropOutcome {
  PathFlows path_flows;
  PathFlows path_latency;
  std::vector<double> min_latency;  // A per source
  std::vector<double> per_source_cost;
  double total_cost = 0.0;
  double potential = 0.0;
  int sweeps = 0;
};

/// Sum_l of the integral of T_l from 0 to the link total, for equal-split
/// diversion with the given local-path flows.
double beckmann_potential(const LbNetwork& net, std::span<const double> local_flows);

/// True iff every path carrying flow has latency within eps of its source's
/// minimum path latency.
bool wardrop_conditions_hold(const WardropOutcome& w, double eps = kEpsWardrop);

/// Non-atomic equilibrium: minimizes the Beckmann potential by exact
/// coordinate minimization over each source's local-path flow, then checks
/// the variational inequality (ConsistencyError if it fails).
WardropOutcome wardrop_equilibrium(const LbNetwork& net);

}  // namespace altroute
