#include "doctest.h"

#include "altroute/errors.hpp"
#include "altroute/latency.hpp"
#include "altroute/network.hpp"

using namespace altroute;

TEST_CASE("elbow latency values") {
  const auto f = LatencyFn::elbow(0.1, 1e-3, 1.0);
  CHECK(f(1.0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(f(0.9) == 0.0);
  CHECK(f(1.001) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(eval_latency(LatencyFn::affine(0, 1), 0.37) == 1.0);
  CHECK_THROWS_AS(f(-1e-3), DomainError);
}

TEST_CASE("kink points") {
  CHECK(kink_points(LatencyFn::affine(2, 0)).empty());
  const auto k = kink_points(LatencyFn::elbow(0.1, 1e-3, 1.0));
  REQUIRE(k.size() == 1);
  CHECK(k[0] == doctest::Approx(0.999).epsilon(1e-15));
  const auto k2 = kink_points(LatencyFn::elbow(0.1, 1e-3, 1.0, 0.05));
  REQUIRE(k2.size() == 1);
  CHECK(k2[0] == doctest::Approx(0.9995).epsilon(1e-15));
  // kink clamped at zero flow
  CHECK(kink_points(LatencyFn::elbow(1.0, 5.0, 1.0))[0] == 0.0);
}

TEST_CASE("latency parameters are validated") {
  CHECK_THROWS_AS(LatencyFn::affine(-1, 0), DomainError);
  CHECK_THROWS_AS(LatencyFn::affine(0, -1), DomainError);
  CHECK_THROWS_AS(LatencyFn::elbow(0, 1e-3, 1), DomainError);
  CHECK_THROWS_AS(LatencyFn::elbow(0.1, 0, 1), DomainError);
  CHECK_THROWS_AS(LatencyFn::elbow(0.1, 1e-3, 1, -0.1), DomainError);
}

TEST_CASE("latency integral and derivatives") {
  const auto f = LatencyFn::elbow(0.1, 1e-3, 1.0);
  CHECK(f.integral(0.999) == 0.0);
  // triangle of base 0.001 and height 0.1, then a trapezoid up to 1.001
  CHECK(f.integral(1.0) == doctest::Approx(0.5 * 1e-3 * 0.1).epsilon(1e-9));
  CHECK(f.right_derivative(0.999) == doctest::Approx(100.0));
  CHECK(f.left_derivative(0.999) == 0.0);
  const auto a = LatencyFn::affine(2, 3);
  CHECK(a.integral(2.0) == doctest::Approx(4.0 + 6.0));
}

TEST_CASE("lb network link layout") {
  const LbNetwork net = canonical_network(3);
  CHECK(net.link_count() == 9);
  CHECK(net.local_link(2) == 2);
  CHECK(net.cross_link(0, 1) == 3);
  CHECK(net.cross_link(0, 2) == 4);
  CHECK(net.cross_link(2, 1) == 8);
  CHECK(net.endpoints(net.cross_link(1, 2)) == std::pair<int, int>{1, 2});
  CHECK(net.endpoints(net.local_link(1)) == std::pair<int, int>{1, 3});
  CHECK(net.link_name(net.cross_link(0, 1)) == "l12");
  CHECK(net.link_name(0) == "l1");
  CHECK_THROWS_AS(LbNetwork(1, 1.0, LatencyFn::affine(0, 1), LatencyFn::affine(0, 1)), StructuralError);
}

TEST_CASE("geometric sequence networks") {
  const ParamSequence seq{0.1, 2.0, 0.1, 1.0};
  const LbNetwork net = make_paper_network(seq, 2, 2);
  CHECK(net.local_latency() == LatencyFn::elbow(0.1, seq.delta(2), 1.0, 0.0));
  CHECK(net.cross_latency() == LatencyFn::affine(0.0, 4.0));
  try {
    make_paper_network(seq, 1, 2);
    FAIL("expected a regime error");
  } catch (const RegimeError& e) {
    CHECK(std::string(e.what()).find("c_m < r*L/delta_m") != std::string::npos);
  }
  CHECK_THROWS_AS(make_paper_network(ParamSequence{0.1, 2.0, 0.1, 1.0}, 0, 2), RegimeError);
}

TEST_CASE("validate_profile") {
  const LbNetwork net = canonical_network();
  FlowProfile x(2, net.link_count());
  x(0, net.local_link(0)) = 1;
  x(1, net.local_link(1)) = 1;
  CHECK(validate_profile(net, x).ok());

  FlowProfile y(2, net.link_count());
  y(0, net.local_link(0)) = 0.6;
  y(0, net.cross_link(0, 1)) = 0.4;
  y(0, net.local_link(1)) = 0.4;
  y(1, net.local_link(1)) = 1;
  CHECK(validate_profile(net, y).ok());

  y(0, net.cross_link(0, 1)) = 0.3;
  y(0, net.local_link(1)) = 0.3;
  const auto rep = validate_profile(net, y);
  REQUIRE_FALSE(rep.ok());
  bool shortfall = false;
  for (const auto& v : rep.violations) shortfall = shortfall || std::abs(std::abs(v.amount) - 0.1) < 1e-12;
  CHECK(shortfall);

  FlowProfile bad(2, 3);
  CHECK_THROWS_AS(validate_profile(net, bad), StructuralError);

  FlowProfile neg = x;
  neg(1, net.local_link(1)) = -1e-9;
  CHECK_FALSE(validate_profile(net, neg).ok());
}

TEST_CASE("edge-list form matches the lb network") {
  const LbNetwork net = canonical_network(3);
  const EdgeListNetwork g = net.to_edge_list();
  CHECK(g.players() == 3);
  CHECK(g.edges.size() == 9u);
  const std::vector<double> p{0.4, 0.7, 1.0};
  const FlowProfile x = equal_split_profile(net, p);
  CHECK(validate_profile(g, x).ok());
  CHECK(local_flows_of(net, x) == p);
}
