#include "altroute/game.hpp"

#include <algorithm>
#include <numeric>

#include "altroute/errors.hpp"

namespace altroute {

std::string to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::ClosedForm: return "closed_form";
    case SolveMethod::BrDynamics: return "br_dynamics";
    case SolveMethod::GridOracle: return "grid_oracle";
  }
  return "unknown";
}

double EquilibriumResult::total_cost() const {
  return std::accumulate(actual_costs.begin(), actual_costs.end(), 0.0);
}

namespace {

double edge_list_cost(const EdgeListNetwork& net, const FlowProfile& x,
                      const std::vector<double>& totals, int i) {
  double j = 0.0;
  for (int l = 0; l < x.links(); ++l) {
    const double f = x(i, l);
    if (f == 0.0) continue;
    j += f * net.edges[static_cast<std::size_t>(l)].latency(std::max(0.0, totals[static_cast<std::size_t>(l)]));
  }
  return j;
}

void require_feasible(const EdgeListNetwork& net, const FlowProfile& x) {
  const auto report = validate_profile(net, x);
  if (!report.ok()) throw StructuralError("infeasible flow profile: " + report.describe());
}

}  // namespace

double player_cost(const EdgeListNetwork& net, const FlowProfile& x, int i) {
  require_feasible(net, x);
  if (i < 0 || i >= net.players()) throw StructuralError("player index out of range");
  return edge_list_cost(net, x, x.link_totals(), i);
}

double player_cost(const LbNetwork& net, const FlowProfile& x, int i) {
  return player_cost(net.to_edge_list(), x, i);
}

std::vector<double> player_costs(const LbNetwork& net, const FlowProfile& x) {
  const auto g = net.to_edge_list();
  require_feasible(g, x);
  const auto totals = x.link_totals();
  std::vector<double> out;
  for (int i = 0; i < net.players(); ++i) out.push_back(edge_list_cost(g, x, totals, i));
  return out;
}

double perceived_cost(const LbNetwork& net, const FlowProfile& x, const DocMatrix& doc, int i) {
  if (doc.size() != net.players()) throw StructuralError("DoC matrix size does not match player count");
  return doc.apply_row(i, player_costs(net, x));
}

std::vector<double> reduced_costs(const LbNetwork& net, std::span<const double> local_flows) {
  const int n = net.players();
  const double r = net.demand();
  if (static_cast<int>(local_flows.size()) != n) throw StructuralError("expected one local flow per player");
  constexpr double slack = 1e-12;
  double shed_total = 0.0;
  for (double p : local_flows) {
    if (!(p >= -slack && p <= r + slack)) {
      throw DomainError("local flow " + std::to_string(p) + " outside [0, r]");
    }
    shed_total += r - p;
  }
  const auto& tl = net.local_latency();
  const auto& tc = net.cross_latency();
  std::vector<double> local_latency(static_cast<std::size_t>(n));
  double latency_sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double p = local_flows[static_cast<std::size_t>(j)];
    const double total = p + (shed_total - (r - p)) / (n - 1);
    local_latency[static_cast<std::size_t>(j)] = tl(std::max(0.0, total));
    latency_sum += local_latency[static_cast<std::size_t>(j)];
  }
  std::vector<double> cost(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double p = local_flows[static_cast<std::size_t>(i)];
    const double share = std::max(0.0, (r - p) / (n - 1));
    const double own = local_latency[static_cast<std::size_t>(i)];
    cost[static_cast<std::size_t>(i)] =
        p * own + share * ((n - 1) * tc(share) + latency_sum - own);
  }
  return cost;
}

EquilibriumResult make_result(const LbNetwork& net, const DocMatrix& doc,
                              std::span<const double> local_flows, SolveMethod method) {
  EquilibriumResult res;
  res.local_flows.assign(local_flows.begin(), local_flows.end());
  res.flows = equal_split_profile(net, local_flows);
  res.actual_costs = player_costs(net, res.flows);
  res.perceived_costs = doc.apply(res.actual_costs);
  res.method = method;
  return res;
}

double marginal_link_cost(const LatencyFn& f, double own, double total) {
  return f(total) + own * f.right_derivative(total);
}

}  // namespace altroute
