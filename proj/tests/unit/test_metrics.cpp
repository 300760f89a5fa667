#include "doctest.h"

#include <cmath>

#include "altroute/errors.hpp"
#include "altroute/metrics.hpp"
#include "altroute/welfare.hpp"

using namespace altroute;

namespace {

const ParamSequence kSeq{0.1, 2.0, 0.1, 1.0};

double poa_formula(double r, double L, double delta, double c) {
  const double x = r / 2 + 0.5 * c / (L / delta);
  return 1 + (r - x) * c / (r * L);
}

}  // namespace

TEST_CASE("price of anarchy on the canonical net") {
  const PoaReport p = price_of_anarchy(canonical_network());
  CHECK(p.poa == doctest::Approx(5.95).epsilon(1e-12));
  REQUIRE(p.closed_form_poa.has_value());
  CHECK(std::abs(p.poa - poa_formula(1, 0.1, 1e-3, 1)) < 1e-9);
  CHECK(p.formula_agrees);
  CHECK(p.opt_total_cost == doctest::Approx(0.2));
  CHECK(p.worst_ne_total_cost == doctest::Approx(1.19));
}

TEST_CASE("price of anarchy grows along the sequence") {
  double prev = 0.0;
  for (int m = 2; m <= 6; ++m) {
    const PoaReport p = price_of_anarchy(make_paper_network(kSeq, m, 2));
    CHECK(std::abs(p.poa - poa_formula(1, 0.1, kSeq.delta(m), kSeq.cross_cost(m))) < 1e-9);
    CHECK(p.poa > prev);
    prev = p.poa;
  }
  CHECK(prev > 100.0);
}

TEST_CASE("price of anarchy needs the elbow regime") {
  const LbNetwork affine(2, 1.0, LatencyFn::affine(1, 0), LatencyFn::affine(0, 1));
  CHECK_THROWS_AS(price_of_anarchy(affine), RegimeError);
}

TEST_CASE("wardrop price of anarchy is one along the sequence") {
  for (int m = 2; m <= 6; ++m) {
    const WardropPoaReport w = wardrop_price_of_anarchy(make_paper_network(kSeq, m, 2));
    CHECK(w.local_only);
    CHECK(std::abs(w.poa - 1.0) < 1e-9);
  }
}

TEST_CASE("beta grids") {
  const auto g = default_beta_grid(2);
  CHECK(g.back() == 1.0);
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(std::find(g.begin(), g.end(), 0.5 + 1e-6) != g.end());
  const auto c = compact_beta_grid(3);
  CHECK(std::find(c.begin(), c.end(), 2.0 / 3 + 1e-6) != c.end());
  CHECK(std::find(c.begin(), c.end(), 1.0) != c.end());
}

TEST_CASE("value of unilateral altruism on the canonical net") {
  const VouReport v = value_of_unilateral_altruism(canonical_network(), 0);
  REQUIRE(v.available);
  CHECK(std::abs(v.vou - 2.975) < 1e-6);
  CHECK(v.altruistic_best_cost == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(v.selfish_best_cost == doctest::Approx(0.595).epsilon(1e-12));
  REQUIRE(v.paper_lower_bound.has_value());
  CHECK(v.vou >= *v.paper_lower_bound - 1e-9);
  CHECK(v.beta_at_best > 0.49);
}

TEST_CASE("value of unilateral altruism with a single beta") {
  const VouReport one = value_of_unilateral_altruism(canonical_network(), 1, {1.0});
  CHECK(one.vou == doctest::Approx(2.975).epsilon(1e-9));
  // too little altruism only nudges the equilibrium
  const VouReport low = value_of_unilateral_altruism(canonical_network(), 1, {0.1});
  CHECK(low.available);
  CHECK(low.vou < 1.01);
}

TEST_CASE("altruism spills over to the selfish players") {
  const SpilloverReport s = altruism_benefit_spillover(canonical_network(), 0, 0.75);
  REQUIRE(s.applicable);
  CHECK(s.deltas[0] == doctest::Approx(0.395));
  CHECK(s.deltas[1] > 0.5);
  CHECK_FALSE(altruism_benefit_spillover(canonical_network(), 0, 0.4).applicable);

  const SpilloverReport s3 = altruism_benefit_spillover(canonical_network(3), 0, 0.9);
  REQUIRE(s3.applicable);
  for (double d : s3.deltas) CHECK(d > 0.0);
  CHECK(s3.deltas[0] == doctest::Approx(0.46));
}

TEST_CASE("sweep rows grow in both metrics") {
  const auto rows = sweep_sequence(kSeq, 2, 6, 2, compact_beta_grid(2));
  REQUIRE(rows.size() == 5);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(rows[k].poa.poa > rows[k - 1].poa.poa);
    CHECK(rows[k].vou.vou > rows[k - 1].vou.vou);
    CHECK(rows[k].m == rows[k - 1].m + 1);
  }
  CHECK(rows.back().vou.vou > 10 * rows.front().vou.vou);
  CHECK(rows.front().vou.vou == doctest::Approx(6.5));
}
