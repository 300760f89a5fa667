#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "altroute/best_response.hpp"
#include "altroute/dynamics.hpp"
#include "altroute/equilibrium.hpp"
#include "altroute/errors.hpp"
#include "altroute/scenario.hpp"
#include "altroute/welfare.hpp"
#include "oracles.hpp"

using namespace altroute;

namespace {

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(unsigned long long seed) : rng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  LatencyFn latency() {
    if (integer(0, 1) == 0) return LatencyFn::affine(uniform(0, 5), uniform(0, 5));
    const double width = log_uniform(1e-4, 1.0);
    return LatencyFn::elbow(uniform(0.01, 2), width, uniform(width, 3), uniform(0, 0.5));
  }

  /// Elbow-regime network: c > L > delta and c < r L / delta.
  LbNetwork regime_network(int n) {
    const double r = uniform(0.5, 2.0);
    const double L = uniform(0.05, 0.5);
    const double delta = L * log_uniform(1e-3, 0.5);
    const double c = uniform(L, r * L / delta);
    return LbNetwork(n, r, LatencyFn::elbow(L, delta, r), LatencyFn::affine(0, c));
  }

  std::vector<double> flows(int n, double r) {
    std::vector<double> p(n);
    for (double& x : p) x = uniform(0, r);
    return p;
  }

  DocMatrix doc(int n) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (auto& row : rows) {
      double s = 0.0;
      for (double& w : row) s += (w = uniform(0, 1));
      for (double& w : row) w /= s;
    }
    return DocMatrix(rows);
  }
};

std::vector<LbNetwork> scenario_networks() {
  std::vector<LbNetwork> nets;
  const auto dir = std::filesystem::path(ALTROUTE_SOURCE_DIR) / "scenarios";
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    const Scenario s = load_scenario(f);
    if (const auto* e = std::get_if<ExplicitNetworkSpec>(&s.network)) {
      nets.emplace_back(e->players, e->demand, e->local, e->cross);
    } else {
      const auto& q = std::get<SequenceNetworkSpec>(s.network);
      for (int m = q.m_from; m <= q.m_to; ++m) {
        try {
          nets.push_back(make_paper_network(q.seq, m, q.players));
        } catch (const RegimeError&) {
        }
      }
    }
  }
  return nets;
}

}  // namespace

TEST_CASE("latency is nonnegative, nondecreasing and convex") {
  Gen g(1);
  for (int k = 0; k < 1000; ++k) {
    const LatencyFn f = g.latency();
    const double a = g.uniform(0, 4), b = g.uniform(0, 4), t = g.uniform(0, 1);
    const double lo = std::min(a, b), hi = std::max(a, b);
    const double scale = 1 + std::abs(f(hi));
    CHECK(f(lo) >= 0.0);
    CHECK(f(lo) <= f(hi) + 1e-12 * scale);
    CHECK(f(t * lo + (1 - t) * hi) <= t * f(lo) + (1 - t) * f(hi) + 1e-12 * scale);
    CHECK(f.left_derivative(hi) <= f.right_derivative(hi) + 1e-12);
  }
}

TEST_CASE("perceived cost is linear in the weights") {
  Gen g(2);
  for (int k = 0; k < 500; ++k) {
    const int n = g.integer(2, 4);
    const LbNetwork net(n, g.uniform(0.5, 2), g.latency(), g.latency());
    const FlowProfile x = equal_split_profile(net, g.flows(n, net.demand()));
    const DocMatrix a = g.doc(n), b = g.doc(n);
    const double t = g.uniform(0, 1);
    std::vector<std::vector<double>> mixed(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) mixed[i][j] = t * a(i, j) + (1 - t) * b(i, j);
    }
    const DocMatrix m(mixed);
    const auto J = player_costs(net, x);
    for (int i = 0; i < n; ++i) {
      const double lhs = perceived_cost(net, x, m, i);
      const double rhs = t * perceived_cost(net, x, a, i) + (1 - t) * perceived_cost(net, x, b, i);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      double direct = 0.0;
      for (int j = 0; j < n; ++j) direct += m(i, j) * J[j];
      CHECK(lhs == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("best response in the smooth region matches the interior formula") {
  Gen g(3);
  int checked = 0;
  for (int attempt = 0; checked < 200 && attempt < 100000; ++attempt) {
    const LbNetwork net = g.regime_network(2);
    const auto& e = net.local_latency().as_elbow();
    const oracle::Net o{2, net.demand(), e.height, e.width, e.knee, 0.0, 0.0, net.cross_latency().as_affine().b};
    const double q = g.uniform(0, o.r);
    const double p = oracle::smooth_best_response(o, q);
    // both local links on the ascending branch and p interior
    if (!(p > 0 && p < o.r)) continue;
    if (p + (o.r - q) < o.r - o.delta || q + (o.r - p) < o.r - o.delta) continue;
    const std::vector<double> x{0.5 * o.r, q};
    const BestResponse br = best_response(net, DocMatrix::selfish(2), 0, x);
    CHECK(br.local_flow == doctest::Approx(p).epsilon(1e-10));
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("wardrop flows satisfy the variational inequality on every scenario net") {
  Gen g(4);
  for (const LbNetwork& net : scenario_networks()) {
    const WardropOutcome w = wardrop_equilibrium(net);
    const int n = net.players();
    std::vector<double> load(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) load[j] += w.path_flows[i][j];
    }
    auto path_latency = [&](int i, int j) {
      const double local = net.local_latency()(load[j]);
      return i == j ? local : local + net.cross_latency()(w.path_flows[i][j]);
    };
    for (int k = 0; k < 200; ++k) {
      double vi = 0.0;
      for (int i = 0; i < n; ++i) {
        std::vector<double> y(n);
        double s = 0.0;
        for (double& v : y) s += (v = g.uniform(0, 1));
        for (int j = 0; j < n; ++j) vi += path_latency(i, j) * (y[j] / s * net.demand() - w.path_flows[i][j]);
      }
      CHECK(vi >= -1e-9);
    }
  }
}

TEST_CASE("social optimum lower-bounds every verified equilibrium found") {
  Gen g(5);
  DynamicsOptions o;
  o.record_trace = false;
  o.max_iter = 20000;
  int verified = 0;
  for (int k = 0; k < 60; ++k) {
    const int n = g.integer(2, 3);
    const LbNetwork net = g.regime_network(n);
    const double opt = social_optimum(net).total_cost;
    const DocMatrix doc = k % 3 == 0 ? DocMatrix::selfish(n) : DocMatrix::altruistic(n, g.integer(0, n - 1), g.uniform(0, 1));
    const auto res = br_dynamics(net, doc, g.flows(n, net.demand()), o).result;
    if (!res.verified) continue;
    ++verified;
    CHECK(opt <= res.total_cost() * (1 + 1e-9) + 1e-12);
  }
  CHECK(verified > 30);
}

TEST_CASE("convex combinations of feasible profiles stay feasible") {
  Gen g(6);
  for (int k = 0; k < 300; ++k) {
    const int n = g.integer(2, 4);
    const LbNetwork net(n, g.uniform(0.5, 2), g.latency(), g.latency());
    const FlowProfile a = equal_split_profile(net, g.flows(n, net.demand()));
    PathFlows y(n, std::vector<double>(n));
    for (auto& row : y) {
      double s = 0.0;
      for (double& v : row) s += (v = g.uniform(0, 1));
      for (double& v : row) v = v / s * net.demand();
    }
    const FlowProfile b = path_flow_profile(net, y);
    REQUIRE(validate_profile(net, a).ok());
    REQUIRE(validate_profile(net, b).ok());
    const double t = g.uniform(0, 1);
    FlowProfile c(n, net.link_count());
    for (int i = 0; i < n; ++i) {
      for (int l = 0; l < net.link_count(); ++l) c(i, l) = t * a(i, l) + (1 - t) * b(i, l);
    }
    CHECK(validate_profile(net, c).ok());
    c(0, 0) += 1e-6;
    CHECK_FALSE(validate_profile(net, c).ok());
  }
}
