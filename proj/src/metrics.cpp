#include "altroute/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "altroute/errors.hpp"
#include "altroute/grid_oracle.hpp"
#include "altroute/welfare.hpp"

namespace altroute {

namespace {

constexpr double kSameEquilibrium = 1e-6;

/// Equilibria reachable from each start; only verified results are kept.
std::vector<EquilibriumResult> refined_equilibria(const LbNetwork& net, const DocMatrix& doc,
                                                  const std::vector<std::vector<double>>& starts,
                                                  const MetricsOptions& opts) {
  std::vector<EquilibriumResult> out;
  DynamicsOptions dyn = opts.dynamics;
  dyn.eps_eq = opts.eps_eq;
  dyn.record_trace = false;
  for (const auto& s : starts) {
    auto r = br_dynamics(net, doc, s, dyn).result;
    if (r.verified) out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::vector<double>> grid_starts(const LbNetwork& net, const DocMatrix& doc, const MetricsOptions& opts) {
  std::vector<std::vector<double>> starts;
  if (opts.grid_step <= 0.0 || net.players() > 3) return starts;
  for (auto& g : grid_oracle_ne(net, doc, opts.grid_step, opts.eps_eq)) starts.push_back(std::move(g.local_flows));
  return starts;
}

}  // namespace

PoaReport price_of_anarchy(const LbNetwork& net, const MetricsOptions& opts) {
  const ElbowRegime reg = elbow_regime(net);
  const DocMatrix selfish = DocMatrix::selfish(net.players());

  const EquilibriumResult closed = closed_form_selfish_ne(net);
  std::vector<EquilibriumResult> eqs{closed};
  for (auto& e : refined_equilibria(net, selfish, grid_starts(net, selfish, opts), opts)) {
    // dynamics stop within eps_fp of an equilibrium; keep the exact one when they coincide
    double dist = 0.0;
    for (std::size_t i = 0; i < e.local_flows.size(); ++i) {
      dist = std::max(dist, std::abs(e.local_flows[i] - closed.local_flows[i]));
    }
    if (dist > kSameEquilibrium) eqs.push_back(std::move(e));
  }

  PoaReport rep;
  rep.equilibria_considered = static_cast<int>(eqs.size());
  rep.worst_ne_total_cost = -std::numeric_limits<double>::infinity();
  for (const auto& e : eqs) rep.worst_ne_total_cost = std::max(rep.worst_ne_total_cost, e.total_cost());
  rep.opt_total_cost = social_optimum(net).total_cost;
  rep.poa = rep.worst_ne_total_cost / rep.opt_total_cost;

  const double x = closed.local_flows.front();
  rep.closed_form_poa = 1.0 + (reg.demand - x) * reg.cross_cost / (reg.demand * reg.height);
  rep.formula_agrees = std::abs(rep.poa - *rep.closed_form_poa) < 1e-9;
  return rep;
}

WardropPoaReport wardrop_price_of_anarchy(const LbNetwork& net) {
  const WardropOutcome w = wardrop_equilibrium(net);
  WardropPoaReport rep;
  rep.wardrop_total_cost = w.total_cost;
  rep.opt_total_cost = social_optimum(net).total_cost;
  rep.poa = rep.wardrop_total_cost / rep.opt_total_cost;
  rep.local_only = true;
  for (std::size_t i = 0; i < w.path_flows.size(); ++i) {
    for (std::size_t j = 0; j < w.path_flows[i].size(); ++j) {
      if (i != j && w.path_flows[i][j] > kFlowTolerance) rep.local_only = false;
    }
  }
  return rep;
}

std::vector<double> default_beta_grid(int n) {
  std::vector<double> grid;
  for (int k = 1; k <= 101; ++k) grid.push_back(static_cast<double>(k) / 101.0);
  grid.push_back(1.0 / n + 1e-6);
  grid.push_back(static_cast<double>(n - 1) / n + 1e-6);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::vector<double> compact_beta_grid(int n) {
  std::vector<double> grid{0.25, 0.5, 0.75, 1.0, 1.0 / n + 1e-6, static_cast<double>(n - 1) / n + 1e-6};
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

VouReport value_of_unilateral_altruism(const LbNetwork& net, int player, std::vector<double> beta_grid,
                                       const MetricsOptions& opts) {
  const int n = net.players();
  if (player < 0 || player >= n) throw DomainError("player index out of range");
  if (beta_grid.empty()) beta_grid = default_beta_grid(n);
  for (double b : beta_grid) {
    if (!(b > 0.0 && b <= 1.0)) throw DomainError("beta values must lie in (0, 1]");
  }

  VouReport rep;
  const DocMatrix selfish = DocMatrix::selfish(n);
  std::vector<EquilibriumResult> selfish_eqs;
  if (in_elbow_regime(net)) {
    selfish_eqs.push_back(closed_form_selfish_ne(net));
  } else {
    selfish_eqs = refined_equilibria(net, selfish, {pure_local(net)}, opts);
  }
  if (selfish_eqs.empty()) return rep;
  rep.selfish_best_cost = std::numeric_limits<double>::infinity();
  for (const auto& e : selfish_eqs) {
    rep.selfish_best_cost = std::min(rep.selfish_best_cost, e.actual_costs[static_cast<std::size_t>(player)]);
  }

  std::vector<std::vector<double>> base_starts{pure_local(net), selfish_eqs.front().local_flows};
  if (net.local_latency().is_elbow() && net.local_latency().as_elbow().width * (n - 1) <= net.demand()) {
    base_starts.push_back(load_taker_profile(net, player));
  }

  rep.altruistic_best_cost = std::numeric_limits<double>::infinity();
  for (double beta : beta_grid) {
    const DocMatrix doc = DocMatrix::altruistic(n, player, beta);
    auto starts = base_starts;
    for (auto& s : grid_starts(net, doc, opts)) starts.push_back(std::move(s));
    for (const auto& e : refined_equilibria(net, doc, starts, opts)) {
      ++rep.equilibria_considered;
      const double cost = e.actual_costs[static_cast<std::size_t>(player)];
      if (cost < rep.altruistic_best_cost) {
        rep.altruistic_best_cost = cost;
        rep.beta_at_best = beta;
        rep.best_profile = e.local_flows;
      }
    }
  }

  if (n == 2 && in_elbow_regime(net)) {
    const ElbowRegime reg = elbow_regime(net);
    const double rl = reg.demand * reg.height;
    rep.paper_lower_bound = (rl + (reg.demand / 2 - reg.zeta()) * reg.cross_cost) / (2 * rl);
  }
  rep.available = rep.equilibria_considered > 0;
  rep.vou = rep.available ? rep.selfish_best_cost / rep.altruistic_best_cost : std::nan("");
  return rep;
}

SpilloverReport altruism_benefit_spillover(const LbNetwork& net, int player, double beta, double eps_eq) {
  const int n = net.players();
  if (player < 0 || player >= n) throw DomainError("player index out of range");
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("beta must lie in (0, 1]");

  SpilloverReport rep;
  rep.beta = beta;
  rep.profile = load_taker_profile(net, player);
  const DocMatrix doc = DocMatrix::altruistic(n, player, beta);
  rep.check = verify_equilibrium(net, doc, rep.profile, eps_eq);
  if (!rep.check.pass) return rep;

  rep.applicable = true;
  rep.selfish_costs = closed_form_selfish_ne(net).actual_costs;
  rep.altruistic_costs = reduced_costs(net, rep.profile);
  for (int i = 0; i < n; ++i) {
    rep.deltas.push_back(rep.selfish_costs[static_cast<std::size_t>(i)] - rep.altruistic_costs[static_cast<std::size_t>(i)]);
  }
  return rep;
}

std::vector<SweepRow> sweep_sequence(const ParamSequence& seq, int m_from, int m_to, int n,
                                     const std::vector<double>& beta_grid, const MetricsOptions& opts, int player) {
  if (m_from > m_to) throw ConfigError("m_from must not exceed m_to");
  std::vector<SweepRow> rows;
  for (int m = m_from; m <= m_to; ++m) {
    const LbNetwork net = make_paper_network(seq, m, n);
    SweepRow row;
    row.m = m;
    row.delta = seq.delta(m);
    row.cross_cost = seq.cross_cost(m);
    row.zeta = elbow_regime(net).zeta();
    row.poa = price_of_anarchy(net, opts);
    row.wardrop = wardrop_price_of_anarchy(net);
    row.vou = value_of_unilateral_altruism(net, player, beta_grid, opts);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace altroute
