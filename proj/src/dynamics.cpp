#include "altroute/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "altroute/best_response.hpp"
#include "altroute/equilibrium.hpp"
#include "altroute/errors.hpp"

namespace altroute {

std::vector<double> pure_local(const LbNetwork& net) {
  return std::vector<double>(static_cast<std::size_t>(net.players()), net.demand());
}

DynamicsResult br_dynamics(const LbNetwork& net, const DocMatrix& doc,
                           std::span<const double> start, const DynamicsOptions& opts) {
  const int n = net.players();
  if (doc.size() != n) throw StructuralError("DoC matrix size does not match player count");
  if (static_cast<int>(start.size()) != n) throw StructuralError("expected one local flow per player");
  for (double p : start) {
    if (!(p >= 0.0 && p <= net.demand())) throw DomainError("starting local flow outside [0, r]");
  }
  if (opts.max_iter < 1) throw ConfigError("max_iter must be >= 1");

  std::vector<int> order = opts.order;
  if (order.empty()) {
    for (int i = 0; i < n; ++i) order.push_back(i);
  } else {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(sorted.size()) != n || sorted[static_cast<std::size_t>(i)] != i) {
        throw ConfigError("player order must be a permutation of 0..n-1");
      }
    }
  }

  DynamicsResult out;
  std::vector<double> x(start.begin(), start.end());
  if (opts.record_trace) out.trace.push_back({0, x, reduced_costs(net, x)});

  bool converged = false;
  int round = 0;
  while (round < opts.max_iter) {
    ++round;
    double change = 0.0;
    for (int i : order) {
      const double next = best_response(net, doc, i, x, opts.eps_tie).local_flow;
      change = std::max(change, std::abs(next - x[static_cast<std::size_t>(i)]));
      x[static_cast<std::size_t>(i)] = next;
    }
    if (opts.record_trace) out.trace.push_back({round, x, reduced_costs(net, x)});
    if (change < opts.eps_fp) {
      converged = true;
      break;
    }
  }

  out.result = make_result(net, doc, x, SolveMethod::BrDynamics);
  out.result.converged = converged;
  out.result.iterations = round;
  out.result.verified = converged && verify_equilibrium(net, doc, x, opts.eps_eq).pass;
  return out;
}

DynamicsResult br_dynamics(const LbNetwork& net, const DocMatrix& doc, const FlowProfile& start,
                           const DynamicsOptions& opts) {
  const auto x0 = equal_split_local_flows(net, start);
  return br_dynamics(net, doc, x0, opts);
}

}  // namespace altroute
