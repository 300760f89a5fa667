#pragma once

#include <span>
#include <vector>

#include "altroute/doc_matrix.hpp"
#include "altroute/game.hpp"
#include "altroute/network.hpp"

namespace altroute {

struct DynamicsOptions {
  int max_iter = 1'000'000;  // rounds
  double eps_fp = kEpsFixedPoint;
  double eps_eq = kEpsEq;
  double eps_tie = kEpsTie;
  /// Player update order within a round; empty means 0..n-1.
  std::vector<int> order;
  bool record_trace = true;
};

/// State after a full round (round 0 is the starting profile).
struct TraceRecord {
  int round = 0;
  std::vector<double> local_flows;
  std::vector<double> actual_costs;
};

struct DynamicsResult {
  EquilibriumResult result;
  std::vector<TraceRecord> trace;
};

/// Round-robin exact best responses from `start` until the largest flow change
/// over one round drops below eps_fp, or max_iter rounds have run. A run that
/// hits max_iter returns converged = false with its last iterate.
DynamicsResult br_dynamics(const LbNetwork& net, const DocMatrix& doc,
                           std::span<const double> start, const DynamicsOptions& opts = {});
DynamicsResult br_dynamics(const LbNetwork& net, const DocMatrix& doc, const FlowProfile& start,
                           const DynamicsOptions& opts = {});

/// Every player routes its whole demand on its local link.
std::vector<double> pure_local(const LbNetwork& net);

}  // namespace altroute
