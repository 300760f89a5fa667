#include "altroute/grid_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "altroute/equilibrium.hpp"
#include "altroute/errors.hpp"

namespace altroute {

namespace {

constexpr std::size_t kMaxProfiles = 4'000'000;

}  // namespace

std::vector<double> oracle_grid(const LbNetwork& net, double grid_step) {
  const double r = net.demand();
  if (!(std::isfinite(grid_step) && grid_step > 0.0 && grid_step < 0.5 * r)) {
    throw ConfigError("grid step must lie in (0, r/2) to resolve the special points");
  }
  std::vector<std::pair<double, bool>> pts;  // (value, special)
  const auto count = static_cast<long long>(std::floor(r / grid_step + 1e-9));
  for (long long k = 0; k <= count; ++k) pts.emplace_back(static_cast<double>(k) * grid_step, false);
  pts.emplace_back(0.0, true);
  pts.emplace_back(r, true);
  if (net.local_latency().is_elbow()) {
    const double d = net.local_latency().as_elbow().width;
    if (d < r) pts.emplace_back(r - d, true);
  }
  if (in_elbow_regime(net)) pts.emplace_back(symmetric_selfish_local_flow(net), true);

  std::sort(pts.begin(), pts.end());
  std::vector<std::pair<double, bool>> merged;
  const double tol = 1e-12 * std::max(1.0, r);
  for (const auto& p : pts) {
    if (p.first < 0.0 || p.first > r) continue;
    if (!merged.empty() && p.first - merged.back().first <= tol) {
      if (p.second && !merged.back().second) merged.back() = p;
      continue;
    }
    merged.push_back(p);
  }
  std::vector<double> grid;
  for (const auto& p : merged) grid.push_back(p.first);
  return grid;
}

std::vector<GridEquilibrium> grid_oracle_ne(const LbNetwork& net, const DocMatrix& doc, double grid_step,
                                            double eps_eq) {
  const int n = net.players();
  if (n > 3) throw ConfigError("grid oracle supports at most 3 players");
  if (doc.size() != n) throw StructuralError("DoC matrix size does not match player count");
  const std::vector<double> grid = oracle_grid(net, grid_step);
  const std::size_t g = grid.size();

  std::size_t total = 1;
  std::vector<std::size_t> stride(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    stride[static_cast<std::size_t>(i)] = total;
    if (total > kMaxProfiles / g) throw ConfigError("grid too fine: more than 4e6 profiles");
    total *= g;
  }

  auto coords = [&](std::size_t idx) {
    std::vector<std::size_t> k(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      k[static_cast<std::size_t>(i)] = idx % g;
      idx /= g;
    }
    return k;
  };

  // perceived[idx * n + i]
  std::vector<double> perceived(total * static_cast<std::size_t>(n));
  std::vector<double> x(static_cast<std::size_t>(n));
  for (std::size_t idx = 0; idx < total; ++idx) {
    const auto k = coords(idx);
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = grid[k[static_cast<std::size_t>(i)]];
    const auto pc = doc.apply(reduced_costs(net, x));
    std::copy(pc.begin(), pc.end(), perceived.begin() + static_cast<std::ptrdiff_t>(idx * n));
  }

  // Best grid deviation value of player i, keyed by the profile index with
  // coordinate i zeroed.
  std::vector<std::vector<double>> best(static_cast<std::size_t>(n),
                                        std::vector<double>(total, std::numeric_limits<double>::infinity()));
  for (std::size_t idx = 0; idx < total; ++idx) {
    const auto k = coords(idx);
    for (int i = 0; i < n; ++i) {
      const std::size_t key = idx - k[static_cast<std::size_t>(i)] * stride[static_cast<std::size_t>(i)];
      double& b = best[static_cast<std::size_t>(i)][key];
      b = std::min(b, perceived[idx * n + static_cast<std::size_t>(i)]);
    }
  }

  std::vector<double> regret(total, 0.0);
  std::vector<char> is_eq(total, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    const auto k = coords(idx);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const std::size_t key = idx - k[static_cast<std::size_t>(i)] * stride[static_cast<std::size_t>(i)];
      worst = std::max(worst, perceived[idx * n + static_cast<std::size_t>(i)] - best[static_cast<std::size_t>(i)][key]);
    }
    regret[idx] = worst;
    is_eq[idx] = worst <= eps_eq;
  }

  std::vector<GridEquilibrium> out;
  std::vector<char> seen(total, 0);
  for (std::size_t start = 0; start < total; ++start) {
    if (!is_eq[start] || seen[start]) continue;
    std::vector<std::size_t> cluster;
    std::deque<std::size_t> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      cluster.push_back(cur);
      const auto k = coords(cur);
      // visit the 3^n - 1 grid neighbours
      std::size_t combos = 1;
      for (int i = 0; i < n; ++i) combos *= 3;
      for (std::size_t c = 0; c < combos; ++c) {
        std::size_t rem = c;
        bool valid = true;
        bool moved = false;
        std::size_t nb = 0;
        for (int i = 0; i < n; ++i) {
          const long long step = static_cast<long long>(rem % 3) - 1;
          rem /= 3;
          const long long ki = static_cast<long long>(k[static_cast<std::size_t>(i)]) + step;
          if (ki < 0 || ki >= static_cast<long long>(g)) {
            valid = false;
            break;
          }
          moved = moved || step != 0;
          nb += static_cast<std::size_t>(ki) * stride[static_cast<std::size_t>(i)];
        }
        if (!valid || !moved || !is_eq[nb] || seen[nb]) continue;
        seen[nb] = 1;
        queue.push_back(nb);
      }
    }
    std::sort(cluster.begin(), cluster.end());

    std::vector<double> centroid(static_cast<std::size_t>(n), 0.0);
    for (std::size_t idx : cluster) {
      const auto k = coords(idx);
      for (int i = 0; i < n; ++i) centroid[static_cast<std::size_t>(i)] += grid[k[static_cast<std::size_t>(i)]];
    }
    for (double& c : centroid) c /= static_cast<double>(cluster.size());

    auto dist2 = [&](std::size_t idx) {
      const auto k = coords(idx);
      double d = 0.0;
      for (int i = 0; i < n; ++i) {
        const double e = grid[k[static_cast<std::size_t>(i)]] - centroid[static_cast<std::size_t>(i)];
        d += e * e;
      }
      return d;
    };
    std::size_t rep = cluster.front();
    for (std::size_t idx : cluster) {
      if (regret[idx] < regret[rep] - kEpsTie ||
          (std::abs(regret[idx] - regret[rep]) <= kEpsTie && dist2(idx) < dist2(rep))) {
        rep = idx;
      }
    }

    GridEquilibrium eq;
    for (std::size_t idx : cluster) {
      const auto k = coords(idx);
      std::vector<double> p;
      for (int i = 0; i < n; ++i) p.push_back(grid[k[static_cast<std::size_t>(i)]]);
      if (idx == rep) eq.local_flows = p;
      eq.members.push_back(std::move(p));
    }
    eq.max_regret = regret[rep];
    out.push_back(std::move(eq));
  }
  return out;
}

}  // namespace altroute
