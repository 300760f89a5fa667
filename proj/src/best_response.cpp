#include "altroute/best_response.hpp"

#include <algorithm>

#include "altroute/errors.hpp"
#include "altroute/piecewise.hpp"

namespace altroute {

namespace {

void check_inputs(const LbNetwork& net, const DocMatrix& doc, int player,
                  std::span<const double> local_flows) {
  const int n = net.players();
  if (doc.size() != n) throw StructuralError("DoC matrix size does not match player count");
  if (player < 0 || player >= n) throw StructuralError("player index out of range");
  if (static_cast<int>(local_flows.size()) != n) throw StructuralError("expected one local flow per player");
}

}  // namespace

double perceived_cost_at(const LbNetwork& net, const DocMatrix& doc, int player,
                         std::span<const double> local_flows, double p) {
  check_inputs(net, doc, player, local_flows);
  std::vector<double> flows(local_flows.begin(), local_flows.end());
  flows[static_cast<std::size_t>(player)] = p;
  return doc.apply_row(player, reduced_costs(net, flows));
}

BestResponse best_response(const LbNetwork& net, const DocMatrix& doc, int player,
                           std::span<const double> local_flows, double eps_tie) {
  check_inputs(net, doc, player, local_flows);
  const int n = net.players();
  const int links = net.link_count();
  const double r = net.demand();

  // Flow matrix with the deviating player at p = 0, and d(x)/dp along its row.
  std::vector<double> flows(local_flows.begin(), local_flows.end());
  flows[static_cast<std::size_t>(player)] = 0.0;
  const FlowProfile base = equal_split_profile(net, flows);
  std::vector<double> dir(static_cast<std::size_t>(links), 0.0);
  dir[static_cast<std::size_t>(net.local_link(player))] = 1.0;
  for (int j = 0; j < n; ++j) {
    if (j == player) continue;
    dir[static_cast<std::size_t>(net.cross_link(player, j))] = -1.0 / (n - 1);
    dir[static_cast<std::size_t>(net.local_link(j))] = -1.0 / (n - 1);
  }
  const std::vector<double> total0 = base.link_totals();
  const auto weights = doc.row(player);

  std::vector<double> breakpoints;
  for (int l = 0; l < links; ++l) {
    const double d = dir[static_cast<std::size_t>(l)];
    if (d == 0.0) continue;
    for (double kink : net.latency(l).kink_points()) {
      breakpoints.push_back((kink - total0[static_cast<std::size_t>(l)]) / d);
    }
  }

  auto piece = [&](double u, double v) {
    const double mid = 0.5 * (u + v);
    Quadratic q;
    for (int l = 0; l < links; ++l) {
      const double t0 = total0[static_cast<std::size_t>(l)];
      const double d = dir[static_cast<std::size_t>(l)];
      const LinearPiece lp = net.latency(l).piece_at(t0 + d * mid);
      // T_l(p) = lat0 + lat1 * p on this piece
      const double lat0 = lp.intercept + lp.slope * t0;
      const double lat1 = lp.slope * d;
      for (int k = 0; k < n; ++k) {
        const double w = weights[static_cast<std::size_t>(k)];
        if (w == 0.0) continue;
        const double f0 = base(k, l);
        const double f1 = k == player ? d : 0.0;
        q.a += w * f1 * lat1;
        q.b += w * (f0 * lat1 + f1 * lat0);
        q.c += w * f0 * lat0;
      }
    }
    return q;
  };
  auto value = [&](double p) {
    flows[static_cast<std::size_t>(player)] = p;
    return doc.apply_row(player, reduced_costs(net, flows));
  };

  const PiecewiseMinimum m =
      minimize_piecewise_quadratic(0.0, r, std::move(breakpoints), piece, value, eps_tie);
  return {m.argmin, m.value, m.ties, m.candidates};
}

}  // namespace altroute
