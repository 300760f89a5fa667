#include "altroute/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "altroute/errors.hpp"
#include "altroute/game.hpp"
#include "altroute/piecewise.hpp"

namespace altroute {

std::string to_string(OptimumMethod m) {
  return m == OptimumMethod::ClosedForm ? "closed_form" : "numeric";
}

FlowProfile path_flow_profile(const LbNetwork& net, const PathFlows& y) {
  const int n = net.players();
  if (static_cast<int>(y.size()) != n) throw StructuralError("expected one path-flow row per player");
  FlowProfile x(n, net.link_count());
  for (int i = 0; i < n; ++i) {
    const auto& row = y[static_cast<std::size_t>(i)];
    if (static_cast<int>(row.size()) != n) throw StructuralError("expected n path flows per player");
    for (int j = 0; j < n; ++j) {
      const double f = row[static_cast<std::size_t>(j)];
      if (j == i) {
        x(i, net.local_link(i)) += f;
      } else {
        x(i, net.cross_link(i, j)) += f;
        x(i, net.local_link(j)) += f;
      }
    }
  }
  return x;
}

double social_cost(const LbNetwork& net, const FlowProfile& x) {
  const auto totals = x.link_totals();
  double s = 0.0;
  for (int l = 0; l < net.link_count(); ++l) {
    const double t = std::max(0.0, totals[static_cast<std::size_t>(l)]);
    s += t * net.latency(l)(t);
  }
  return s;
}

std::vector<double> project_to_simplex(std::span<const double> v, double mass) {
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double t = (cumulative - mass) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (double e : v) out.push_back(std::max(0.0, e - theta));
  return out;
}

namespace {

double path_cost(const LbNetwork& net, const PathFlows& y) {
  return social_cost(net, path_flow_profile(net, y));
}

PathFlows pure_local_paths(const LbNetwork& net) {
  const int n = net.players();
  PathFlows y(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = net.demand();
  return y;
}

}  // namespace

DescentResult projected_descent(const LbNetwork& net, PathFlows y, const DescentOptions& opts) {
  const int n = net.players();
  const double r = net.demand();
  for (auto& row : y) {
    if (static_cast<int>(row.size()) != n) throw StructuralError("expected n path flows per player");
    row = project_to_simplex(row, r);
  }
  if (static_cast<int>(y.size()) != n) throw StructuralError("expected one path-flow row per player");

  double cost = path_cost(net, y);
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    const auto totals = path_flow_profile(net, y).link_totals();
    std::vector<double> marginal(static_cast<std::size_t>(net.link_count()));
    for (int l = 0; l < net.link_count(); ++l) {
      const double t = std::max(0.0, totals[static_cast<std::size_t>(l)]);
      marginal[static_cast<std::size_t>(l)] = marginal_link_cost(net.latency(l), t, t);
    }
    PathFlows grad(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        grad[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            j == i ? marginal[static_cast<std::size_t>(net.local_link(i))]
                   : marginal[static_cast<std::size_t>(net.cross_link(i, j))] +
                         marginal[static_cast<std::size_t>(net.local_link(j))];
      }
    }

    bool improved = false;
    double moved = 0.0;
    for (double step = opts.initial_step * r; step > 1e-18 * r; step *= 0.5) {
      PathFlows trial = y;
      for (int i = 0; i < n; ++i) {
        auto& row = trial[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] -= step * grad[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        row = project_to_simplex(row, r);
      }
      const double trial_cost = path_cost(net, trial);
      if (trial_cost < cost) {
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            moved = std::max(moved, std::abs(trial[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                                             y[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
          }
        }
        y = std::move(trial);
        cost = trial_cost;
        improved = true;
        break;
      }
    }
    if (!improved || moved < 1e-15 * r) break;
  }
  return {std::move(y), cost, it};
}

SocialOutcome social_optimum(const LbNetwork& net, const DescentOptions& opts) {
  const auto& cross = net.cross_latency();
  const bool constant_positive_cross = cross.is_affine() && cross.as_affine().a == 0.0 && cross.as_affine().b > 0.0;
  const bool free_cross = cross.is_affine() && cross.as_affine().a == 0.0 && cross.as_affine().b == 0.0;

  SocialOutcome out;
  out.flows_unique = !free_cross;
  const PathFlows local = pure_local_paths(net);
  const DescentResult check = projected_descent(net, local, opts);

  if (constant_positive_cross) {
    out.method = OptimumMethod::ClosedForm;
    out.flows = path_flow_profile(net, local);
  } else {
    out.method = OptimumMethod::Numeric;
    out.flows = path_flow_profile(net, check.path_flows);
  }
  out.per_player = player_costs(net, out.flows);
  out.total_cost = std::accumulate(out.per_player.begin(), out.per_player.end(), 0.0);
  out.verifier_gap = out.total_cost - check.total_cost;
  if (out.verifier_gap > 1e-8) {
    throw ConsistencyError("descent verifier found a feasible profile cheaper than pure-local routing by " +
                           std::to_string(out.verifier_gap));
  }
  return out;
}

double beckmann_potential(const LbNetwork& net, std::span<const double> local_flows) {
  const auto totals = equal_split_profile(net, local_flows).link_totals();
  double phi = 0.0;
  for (int l = 0; l < net.link_count(); ++l) {
    phi += net.latency(l).integral(std::max(0.0, totals[static_cast<std::size_t>(l)]));
  }
  return phi;
}

bool wardrop_conditions_hold(const WardropOutcome& w, double eps) {
  for (std::size_t i = 0; i < w.path_flows.size(); ++i) {
    for (std::size_t j = 0; j < w.path_flows[i].size(); ++j) {
      const double lat = w.path_latency[i][j];
      if (lat < w.min_latency[i] - eps) return false;
      if (w.path_flows[i][j] > kFlowTolerance && lat > w.min_latency[i] + eps) return false;
    }
  }
  return true;
}

WardropOutcome wardrop_equilibrium(const LbNetwork& net) {
  const int n = net.players();
  const int links = net.link_count();
  const double r = net.demand();
  std::vector<double> p(static_cast<std::size_t>(n), r);

  WardropOutcome out;
  constexpr int kMaxSweeps = 10'000;
  for (out.sweeps = 1; out.sweeps <= kMaxSweeps; ++out.sweeps) {
    double change = 0.0;
    for (int i = 0; i < n; ++i) {
      std::vector<double> q = p;
      q[static_cast<std::size_t>(i)] = 0.0;
      const auto total0 = equal_split_profile(net, q).link_totals();
      std::vector<double> dir(static_cast<std::size_t>(links), 0.0);
      dir[static_cast<std::size_t>(net.local_link(i))] = 1.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        dir[static_cast<std::size_t>(net.cross_link(i, j))] = -1.0 / (n - 1);
        dir[static_cast<std::size_t>(net.local_link(j))] = -1.0 / (n - 1);
      }
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
        Quadratic qd;
        for (int l = 0; l < links; ++l) {
          const double d = dir[static_cast<std::size_t>(l)];
          if (d == 0.0) continue;
          const double t0 = total0[static_cast<std::size_t>(l)];
          const LinearPiece lp = net.latency(l).piece_at(t0 + d * mid);
          // integral of (alpha + beta t) along t = t0 + d p, up to a constant
          qd.a += 0.5 * lp.slope * d * d;
          qd.b += (lp.intercept + lp.slope * t0) * d;
        }
        return qd;
      };
      auto value = [&](double x) {
        q[static_cast<std::size_t>(i)] = x;
        return beckmann_potential(net, q);
      };
      const PiecewiseMinimum m = minimize_piecewise_quadratic(0.0, r, breakpoints, piece, value, kEpsTie);
      change = std::max(change, std::abs(m.argmin - p[static_cast<std::size_t>(i)]));
      p[static_cast<std::size_t>(i)] = m.argmin;
    }
    if (change < 1e-15 * r) break;
  }
  out.sweeps = std::min(out.sweeps, kMaxSweeps);

  const auto totals = equal_split_profile(net, p).link_totals();
  out.potential = beckmann_potential(net, p);
  out.path_flows.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  out.path_latency = out.path_flows;
  for (int i = 0; i < n; ++i) {
    double amin = std::numeric_limits<double>::infinity();
    double cost = 0.0;
    for (int j = 0; j < n; ++j) {
      double flow = 0.0;
      double lat = 0.0;
      if (j == i) {
        flow = p[static_cast<std::size_t>(i)];
        lat = net.local_latency()(totals[static_cast<std::size_t>(net.local_link(i))]);
      } else {
        const int c = net.cross_link(i, j);
        flow = (r - p[static_cast<std::size_t>(i)]) / (n - 1);
        lat = net.cross_latency()(std::max(0.0, totals[static_cast<std::size_t>(c)])) +
              net.local_latency()(totals[static_cast<std::size_t>(net.local_link(j))]);
      }
      out.path_flows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = flow;
      out.path_latency[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = lat;
      amin = std::min(amin, lat);
      cost += flow * lat;
    }
    out.min_latency.push_back(amin);
    out.per_source_cost.push_back(cost);
    out.total_cost += cost;
  }
  if (!wardrop_conditions_hold(out)) {
    throw ConsistencyError("Beckmann minimizer violates the Wardrop conditions");
  }
  return out;
}

}  // namespace altroute
