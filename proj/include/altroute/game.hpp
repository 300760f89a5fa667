#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "altroute/doc_matrix.hpp"
#include "altroute/network.hpp"

namespace altroute {

/// Fixed-point tolerance on flows for best-response dynamics.
inline constexpr double kEpsFixedPoint = 1e-10;
/// Cost tolerance for equilibrium verification.
inline constexpr double kEpsEq = 1e-9;
/// Cost tolerance under which best-response candidates count as tied.
inline constexpr double kEpsTie = 1e-12;

enum class SolveMethod { ClosedForm, BrDynamics, GridOracle };
std::string to_string(SolveMethod m);

struct EquilibriumResult {
  FlowProfile flows;
  std::vector<double> local_flows;
  std::vector<double> actual_costs;
  std::vector<double> perceived_costs;
  bool converged = false;
  bool verified = false;
  int iterations = 0;
  SolveMethod method = SolveMethod::BrDynamics;
  /// Half ratio of cross latency to local marginal latency; NaN unless the
  /// result came from the closed form.
  double zeta = std::nan("");

  double total_cost() const;
};

/// J_i = sum_l x[i][l] * T_l(sum_j x[j][l]). Throws StructuralError if the
/// profile is infeasible.
double player_cost(const LbNetwork& net, const FlowProfile& x, int i);
std::vector<double> player_costs(const LbNetwork& net, const FlowProfile& x);
double player_cost(const EdgeListNetwork& net, const FlowProfile& x, int i);

/// Sum_k alpha[i][k] * J_k.
double perceived_cost(const LbNetwork& net, const FlowProfile& x, const DocMatrix& doc, int i);

/// Actual costs of the equal-split profile with the given local flows, in
/// O(n^2) without building the flow matrix. No feasibility check beyond
/// 0 <= p_i <= r.
std::vector<double> reduced_costs(const LbNetwork& net, std::span<const double> local_flows);

/// Assembles an EquilibriumResult for equal-split local flows.
EquilibriumResult make_result(const LbNetwork& net, const DocMatrix& doc,
                              std::span<const double> local_flows, SolveMethod method);

/// Marginal cost d/d(own) [own * T(total)] of one player on one link.
double marginal_link_cost(const LatencyFn& f, double own, double total);

}  // namespace altroute
