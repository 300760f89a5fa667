#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "altroute/best_response.hpp"
#include "altroute/doc_matrix.hpp"
#include "altroute/dynamics.hpp"
#include "altroute/equilibrium.hpp"
#include "altroute/errors.hpp"
#include "altroute/game.hpp"
#include "altroute/grid_oracle.hpp"
#include "oracles.hpp"

using namespace altroute;

namespace {

FlowProfile profile(const LbNetwork& net, std::vector<double> p) { return equal_split_profile(net, p); }

}  // namespace

TEST_CASE("doc matrix construction") {
  const auto a = DocMatrix::altruistic(2, 0, 0.75);
  CHECK(a(0, 0) == doctest::Approx(0.25));
  CHECK(a(0, 1) == doctest::Approx(0.75));
  CHECK(a(1, 1) == 1.0);
  CHECK(DocMatrix::selfish(3).is_selfish());
  CHECK_FALSE(a.is_selfish());
  const auto eq = DocMatrix::equally_cooperative(4);
  CHECK(eq(2, 3) == doctest::Approx(0.25));
  CHECK_THROWS_AS(DocMatrix({{0.5, 0.6}, {0, 1}}), DomainError);
  CHECK_THROWS_AS(DocMatrix({{1.2, -0.2}, {0, 1}}), DomainError);
  CHECK_THROWS_AS(DocMatrix({{1, 0}}), StructuralError);
  CHECK_THROWS_AS(DocMatrix::altruistic(2, 0, 1.5), DomainError);
}

TEST_CASE("player cost on the canonical net") {
  const LbNetwork net = canonical_network();
  CHECK(player_cost(net, profile(net, {1, 1}), 0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(player_cost(net, profile(net, {0.505, 0.505}), 0) == doctest::Approx(0.595).epsilon(1e-12));
  CHECK(player_cost(net, profile(net, {1, 0.999}), 0) == doctest::Approx(0.2).epsilon(1e-12));
  FlowProfile broken(2, net.link_count());
  broken(0, 0) = 0.5;
  CHECK_THROWS_AS(player_cost(net, broken, 0), StructuralError);
}

TEST_CASE("player cost on the edge-list form") {
  const LbNetwork net = canonical_network(3);
  const auto x = profile(net, {0.2, 0.9, 0.55});
  for (int i = 0; i < 3; ++i) CHECK(player_cost(net.to_edge_list(), x, i) == doctest::Approx(player_cost(net, x, i)));
}

TEST_CASE("reduced costs agree with the full matrix and the oracle") {
  const oracle::Net o{3, 1.0, 0.1, 1e-3, 1.0, 0.0, 0.0, 1.0};
  const LbNetwork net = canonical_network(3);
  const std::vector<double> p{0.3, 0.998, 0.7};
  const auto fast = reduced_costs(net, p);
  const auto full = player_costs(net, profile(net, p));
  const auto ref = oracle::costs(o, p);
  for (int i = 0; i < 3; ++i) {
    CHECK(fast[i] == doctest::Approx(full[i]).epsilon(1e-12));
    CHECK(fast[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(reduced_costs(net, std::vector<double>{0.3, 1.1, 0.5}), DomainError);
}

TEST_CASE("perceived cost") {
  const LbNetwork net = canonical_network();
  const auto x = profile(net, {1, 0.999});
  CHECK(perceived_cost(net, x, DocMatrix::selfish(2), 0) == doctest::Approx(player_cost(net, x, 0)));
  const double j1 = player_cost(net, x, 0), j2 = player_cost(net, x, 1);
  CHECK(perceived_cost(net, x, DocMatrix::altruistic(2, 0, 0.75), 0) == doctest::Approx(0.25 * j1 + 0.75 * j2));
  const auto local = profile(net, {1, 1});
  for (int i = 0; i < 2; ++i) {
    CHECK(perceived_cost(net, local, DocMatrix::equally_cooperative(2), i) == doctest::Approx(0.1));
  }
}

TEST_CASE("best responses at the elbow") {
  const LbNetwork net = canonical_network();
  const std::vector<double> x{1.0, 1.0};
  CHECK(best_response(net, DocMatrix::selfish(2), 1, x).local_flow == doctest::Approx(0.999).epsilon(1e-14));

  const std::vector<double> y{0.0, 0.999};
  CHECK(best_response(net, DocMatrix::altruistic(2, 0, 0.75), 0, y).local_flow == 1.0);
  CHECK(best_response(net, DocMatrix::altruistic(2, 0, 0.4), 0, y).local_flow != doctest::Approx(1.0));
}

TEST_CASE("best response reports ties and prefers load taking") {
  // zero cross cost: player 1 is indifferent over a whole interval
  const LbNetwork net(2, 1.0, LatencyFn::affine(0, 1), LatencyFn::affine(0, 0));
  const std::vector<double> q{0.0, 0.5};
  const BestResponse b = best_response(net, DocMatrix::selfish(2), 0, q);
  CHECK(b.local_flow == 1.0);
  CHECK(b.ties.size() >= 2u);
}

TEST_CASE("best response matches the oracle minimum on a fine grid") {
  const oracle::Net o{2, 1.0, 0.1, 1e-3, 1.0, 0.0, 0.0, 1.0};
  const LbNetwork net = canonical_network();
  for (double q : {0.0, 0.3, 0.5, 0.77, 0.999, 1.0}) {
    const std::vector<double> x{0.0, q};
    const double p = best_response(net, DocMatrix::selfish(2), 0, x).local_flow;
    const double mine = oracle::costs(o, {p, q})[0];
    for (int k = 0; k <= 20000; ++k) CHECK(mine <= oracle::costs(o, {k / 20000.0, q})[0] + 1e-12);
  }
}

TEST_CASE("closed-form selfish equilibrium") {
  const LbNetwork net = canonical_network();
  const EquilibriumResult r = closed_form_selfish_ne(net);
  CHECK(r.local_flows[0] == doctest::Approx(0.505).epsilon(1e-12));
  CHECK(r.actual_costs[1] == doctest::Approx(0.595).epsilon(1e-12));
  CHECK(r.zeta == doctest::Approx(0.005));
  CHECK(r.verified);
  CHECK(r.method == SolveMethod::ClosedForm);
  CHECK(to_string(r.method) == "closed_form");

  // zeta -> 0 as delta -> 0 with c fixed
  const LbNetwork thin(2, 1.0, LatencyFn::elbow(0.1, 1e-9, 1.0), LatencyFn::affine(0, 1));
  const EquilibriumResult t = closed_form_selfish_ne(thin);
  CHECK(t.local_flows[0] == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(t.actual_costs[0] == doctest::Approx(0.1 + 0.5).epsilon(1e-7));

  CHECK_THROWS_AS(closed_form_selfish_ne(canonical_network(2, 0.05)), RegimeError);
  CHECK_THROWS_AS(closed_form_selfish_ne(canonical_network(2, 200.0)), RegimeError);
}

TEST_CASE("symmetric equilibrium for more players") {
  const LbNetwork net = canonical_network(3);
  const EquilibriumResult r = closed_form_selfish_ne(net);
  CHECK(r.local_flows[0] == doctest::Approx(0.34).epsilon(1e-12));
  CHECK(verify_equilibrium(net, DocMatrix::selfish(3), r.local_flows).pass);
  // r/2 + zeta is not an equilibrium for three players
  const std::vector<double> half{0.505, 0.505, 0.505};
  const VerifyResult v = verify_equilibrium(net, DocMatrix::selfish(3), half);
  CHECK_FALSE(v.pass);
  CHECK(v.max_gain > 0.02);
  const oracle::Net o{3, 1.0, 0.1, 1e-3, 1.0, 0.0, 0.0, 1.0};
  CHECK(oracle::grid_max_gain(o, r.local_flows, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 20000) < 1e-9);
  CHECK(oracle::grid_max_gain(o, half, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 20000) > 0.02);
}

TEST_CASE("verify_equilibrium") {
  const LbNetwork net = canonical_network();
  CHECK(verify_equilibrium(net, DocMatrix::altruistic(2, 0, 0.75), std::vector<double>{1, 0.999}).pass);
  const VerifyResult v = verify_equilibrium(net, DocMatrix::selfish(2), std::vector<double>{1, 1});
  REQUIRE_FALSE(v.pass);
  REQUIRE(!v.deviations.empty());
  CHECK(v.deviations.front().player == 0);
  CHECK(v.deviations.front().to == doctest::Approx(0.999).epsilon(1e-14));
  CHECK(v.deviations.front().gain > 0.0);
  CHECK(verify_equilibrium(net, DocMatrix::selfish(2), profile(net, {0.505, 0.505})).pass);
}

TEST_CASE("best-response dynamics") {
  const LbNetwork net = canonical_network();
  const DynamicsResult d = br_dynamics(net, DocMatrix::selfish(2), pure_local(net));
  CHECK(d.result.converged);
  CHECK(d.result.verified);
  CHECK(d.result.local_flows[0] == doctest::Approx(0.505).epsilon(1e-6));
  CHECK(d.trace.front().round == 0);
  CHECK(d.trace.front().actual_costs[0] == doctest::Approx(0.1));
  // the first pushes move exactly delta per player
  CHECK(d.trace[1].local_flows[0] == doctest::Approx(0.999).epsilon(1e-14));
  CHECK(d.trace[1].local_flows[1] == doctest::Approx(0.998).epsilon(1e-14));

  const DynamicsResult a = br_dynamics(net, DocMatrix::altruistic(2, 0, 0.75), pure_local(net));
  CHECK(a.result.verified);
  CHECK(a.result.local_flows[0] == 1.0);
  CHECK(a.result.local_flows[1] == doctest::Approx(0.999).epsilon(1e-14));

  const auto ne = closed_form_selfish_ne(net).local_flows;
  const DynamicsResult s = br_dynamics(net, DocMatrix::selfish(2), ne);
  CHECK(s.result.iterations == 1);
  CHECK(s.result.local_flows == ne);

  DynamicsOptions capped;
  capped.max_iter = 3;
  const DynamicsResult c = br_dynamics(net, DocMatrix::selfish(2), pure_local(net), capped);
  CHECK_FALSE(c.result.converged);
  CHECK(c.result.iterations == 3);

  DynamicsOptions bad;
  bad.order = {0, 0};
  CHECK_THROWS_AS(br_dynamics(net, DocMatrix::selfish(2), pure_local(net), bad), ConfigError);

  DynamicsOptions reversed;
  reversed.order = {1, 0};
  const DynamicsResult rv = br_dynamics(net, DocMatrix::selfish(2), pure_local(net), reversed);
  CHECK(rv.result.local_flows[1] == doctest::Approx(0.505).epsilon(1e-6));
  CHECK(rv.trace[1].local_flows[1] == doctest::Approx(0.999).epsilon(1e-14));

  const DynamicsResult fp = br_dynamics(net, DocMatrix::selfish(2), equal_split_profile(net, std::vector<double>{1, 1}));
  CHECK(fp.result.local_flows == d.result.local_flows);
}

TEST_CASE("closed form and dynamics agree along the sequence") {
  const ParamSequence seq{0.1, 2.0, 0.1, 1.0};
  DynamicsOptions o;
  o.record_trace = false;
  for (int n : {2, 3, 5}) {
    for (int m = 2; m <= 6; ++m) {
      CAPTURE(n);
      CAPTURE(m);
      const LbNetwork net = make_paper_network(seq, m, n);
      const EquilibriumResult cf = closed_form_selfish_ne(net);
      const DynamicsResult d = br_dynamics(net, DocMatrix::selfish(n), pure_local(net), o);
      CHECK(d.result.verified);
      CHECK(cf.verified);
      for (int i = 0; i < n; ++i) CHECK(std::abs(d.result.local_flows[i] - cf.local_flows[i]) < 1e-6);
      // cost identity rL + (r - x)c
      const double x = cf.local_flows[0];
      CHECK(cf.actual_costs[0] == doctest::Approx(0.1 + (1 - x) * seq.cross_cost(m)).epsilon(1e-10));
    }
  }
}

TEST_CASE("load-taker profile") {
  CHECK(load_taker_profile(canonical_network(2), 0) == std::vector<double>{1.0, 0.999});
  const auto p3 = load_taker_profile(canonical_network(3), 1);
  CHECK(p3[1] == 1.0);
  CHECK(p3[0] == doctest::Approx(0.998).epsilon(1e-14));
  const LbNetwork affine(2, 1.0, LatencyFn::affine(1, 0), LatencyFn::affine(0, 1));
  CHECK_THROWS(load_taker_profile(affine, 0));
}

TEST_CASE("marginal cost monotonicity on the ascending branch") {
  CHECK(marginal_cost_strictly_increasing(canonical_network(), 200, 7));
  CHECK(marginal_cost_strictly_increasing(canonical_network(3), 200, 8));
}

TEST_CASE("grid oracle") {
  const LbNetwork net = canonical_network();
  const auto sel = grid_oracle_ne(net, DocMatrix::selfish(2), 1e-3);
  REQUIRE(sel.size() == 1u);
  CHECK(sel[0].local_flows[0] == doctest::Approx(0.505).epsilon(1e-12));

  const auto alt = grid_oracle_ne(net, DocMatrix::altruistic(2, 0, 0.75), 1e-3);
  bool found = false;
  for (const auto& c : alt) {
    for (const auto& m : c.members) found = found || (m[0] == 1.0 && std::abs(m[1] - 0.999) < 1e-15);
  }
  CHECK(found);

  // free rerouting: the grid equilibria are exactly the profiles with link totals (r, r)
  const LbNetwork free(2, 1.0, LatencyFn::elbow(0.1, 1e-3, 1.0), LatencyFn::affine(0, 0));
  const auto cont = grid_oracle_ne(free, DocMatrix::selfish(2), 0.1);
  std::size_t members = 0;
  for (const auto& c : cont) {
    for (const auto& m : c.members) {
      CHECK(m[0] == m[1]);
      ++members;
    }
  }
  CHECK(members == 11);
  // off r/2 a small deviation still pays, which the coarse grid cannot see
  CHECK(verify_equilibrium(free, DocMatrix::selfish(2), std::vector<double>{0.5, 0.5}).pass);
  CHECK_FALSE(verify_equilibrium(free, DocMatrix::selfish(2), std::vector<double>{0.2, 0.2}).pass);

  CHECK_THROWS_AS(grid_oracle_ne(net, DocMatrix::selfish(2), 0.6), ConfigError);
  CHECK_THROWS_AS(grid_oracle_ne(canonical_network(4), DocMatrix::selfish(4), 0.1), ConfigError);
  const auto g = oracle_grid(net, 0.25);
  CHECK(std::find(g.begin(), g.end(), 0.505) != g.end());
  CHECK(std::find(g.begin(), g.end(), 0.999) != g.end());
}
