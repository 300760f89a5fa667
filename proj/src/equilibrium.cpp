#include "altroute/equilibrium.hpp"

#include <algorithm>
#include <random>

#include "altroute/best_response.hpp"
#include "altroute/errors.hpp"

namespace altroute {

ElbowRegime elbow_regime(const LbNetwork& net) {
  if (!net.local_latency().is_elbow()) throw RegimeError("local links must use the elbow latency");
  if (!net.cross_latency().is_affine()) throw RegimeError("cross links must use an affine latency");
  const Elbow& e = net.local_latency().as_elbow();
  const Affine& a = net.cross_latency().as_affine();
  if (e.offset != 0.0) throw RegimeError("elbow offset must be 0");
  if (e.knee != net.demand()) throw RegimeError("elbow knee must equal the demand r");
  if (a.a != 0.0) throw RegimeError("cross latency must be constant (a = 0)");
  check_lb_regime(a.b, e.height, e.width, net.demand());
  return {net.demand(), e.height, e.width, a.b};
}

bool in_elbow_regime(const LbNetwork& net) {
  try {
    elbow_regime(net);
    return true;
  } catch (const RegimeError&) {
    return false;
  }
}

double symmetric_selfish_local_flow(const LbNetwork& net) {
  const ElbowRegime reg = elbow_regime(net);
  const int n = net.players();
  return reg.demand / n + (n - 1) * reg.cross_cost / (n * reg.slope());
}

EquilibriumResult closed_form_selfish_ne(const LbNetwork& net) {
  const ElbowRegime reg = elbow_regime(net);
  const std::vector<double> x(static_cast<std::size_t>(net.players()), symmetric_selfish_local_flow(net));
  const DocMatrix doc = DocMatrix::selfish(net.players());
  EquilibriumResult res = make_result(net, doc, x, SolveMethod::ClosedForm);
  res.zeta = reg.zeta();
  res.converged = true;
  res.verified = verify_equilibrium(net, doc, x).pass;
  return res;
}

VerifyResult verify_equilibrium(const LbNetwork& net, const DocMatrix& doc,
                                std::span<const double> local_flows, double eps_eq) {
  VerifyResult out;
  for (int i = 0; i < net.players(); ++i) {
    const double current = perceived_cost_at(net, doc, i, local_flows, local_flows[static_cast<std::size_t>(i)]);
    const BestResponse br = best_response(net, doc, i, local_flows);
    const double gain = current - br.perceived_cost;
    out.max_gain = std::max(out.max_gain, gain);
    if (gain > eps_eq) {
      out.pass = false;
      out.deviations.push_back({i, local_flows[static_cast<std::size_t>(i)], br.local_flow, gain});
    }
  }
  return out;
}

std::vector<double> equal_split_local_flows(const LbNetwork& net, const FlowProfile& x) {
  const auto report = validate_profile(net, x);
  if (!report.ok()) throw StructuralError("infeasible flow profile: " + report.describe());
  auto p = local_flows_of(net, x);
  if (equal_split_profile(net, p).sup_distance(x) > kFlowTolerance) {
    throw StructuralError("profile does not split cross flow equally");
  }
  return p;
}

VerifyResult verify_equilibrium(const LbNetwork& net, const DocMatrix& doc, const FlowProfile& x,
                                double eps_eq) {
  return verify_equilibrium(net, doc, equal_split_local_flows(net, x), eps_eq);
}

std::vector<double> load_taker_profile(const LbNetwork& net, int altruist) {
  const int n = net.players();
  if (altruist < 0 || altruist >= n) throw StructuralError("altruist index out of range");
  if (!net.local_latency().is_elbow()) throw RegimeError("load-taker profile needs an elbow local latency");
  const double r = net.demand();
  const double shed = (n - 1) * net.local_latency().as_elbow().width;
  if (shed > r) throw RegimeError("elbow width too large for the load-taker profile");
  std::vector<double> x(static_cast<std::size_t>(n), r - shed);
  x[static_cast<std::size_t>(altruist)] = r;
  return x;
}

bool marginal_cost_strictly_increasing(const LbNetwork& net, int samples, unsigned long long seed) {
  const LatencyFn& f = net.local_latency();
  const auto kinks = f.kink_points();
  const double lo = kinks.empty() ? 0.0 : kinks.front();
  const double span = std::max(net.demand(), 1e-6);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    const double total = lo + span * (0.01 + 0.99 * unit(rng));
    const double own = total * unit(rng) * 0.9;
    const double h = span * 1e-3 * (0.1 + unit(rng));
    const double k0 = marginal_link_cost(f, own, total);
    if (!(marginal_link_cost(f, own + h, total) > k0)) return false;
    if (!(marginal_link_cost(f, own, total + h) > k0)) return false;
  }
  return true;
}

}  // namespace altroute
