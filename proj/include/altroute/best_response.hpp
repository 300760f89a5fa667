#pragma once

#include <span>
#include <vector>

#include "altroute/doc_matrix.hpp"
#include "altroute/game.hpp"
#include "altroute/network.hpp"

namespace altroute {

struct BestResponse {
  double local_flow = 0.0;      // minimizing x_i^i
  double perceived_cost = 0.0;  // player i's perceived cost at the minimizer
  std::vector<double> ties;     // all minimizers within eps_tie, ascending
  std::vector<double> candidates;
};

/// Exact best response of `player` to the other players' local flows.
///
/// The player's strategy is its local flow p in [0, r], the remainder split
/// equally over its cross links. Perceived cost is piecewise quadratic in p;
/// every endpoint, latency breakpoint and piece vertex is evaluated and the
/// global minimizer returned (largest p on ties). The entry
/// `local_flows[player]` is ignored.
BestResponse best_response(const LbNetwork& net, const DocMatrix& doc, int player,
                           std::span<const double> local_flows, double eps_tie = kEpsTie);

/// Player `player`'s perceived cost when it plays `p` against `local_flows`.
double perceived_cost_at(const LbNetwork& net, const DocMatrix& doc, int player,
                         std::span<const double> local_flows, double p);

}  // namespace altroute
