#include "altroute/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "altroute/dynamics.hpp"
#include "altroute/equilibrium.hpp"
#include "altroute/grid_oracle.hpp"
#include "altroute/metrics.hpp"
#include "altroute/scenario.hpp"
#include "altroute/welfare.hpp"

namespace altroute {

int ReproductionReport::failures() const {
  return static_cast<int>(std::count_if(claims.begin(), claims.end(), [](const Claim& c) { return !c.pass; }));
}

namespace {

std::string list(const std::vector<double>& v) {
  std::string out = "(";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + format_number(v[k]);
  return out + ")";
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (!(v[k] > v[k - 1])) return false;
  }
  return true;
}

/// Smallest beta (bisection, 60 halvings) at which the load-taker profile
/// passes verification; 1 if it never does below 1.
double gamma_threshold(const LbNetwork& net, double eps_eq) {
  const auto profile = load_taker_profile(net, 0);
  double lo = 0.0, hi = 1.0;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (verify_equilibrium(net, DocMatrix::altruistic(net.players(), 0, mid), profile, eps_eq).pass) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

ReproductionReport emit_paper_reproduction(const std::filesystem::path& out_dir, const ReproductionOptions& opts) {
  std::filesystem::create_directories(out_dir);
  ReproductionReport rep;
  auto claim = [&](std::string id, std::string description, std::string computed, std::string expected, bool pass) {
    rep.claims.push_back({std::move(id), std::move(description), std::move(computed), std::move(expected), pass});
  };

  DynamicsOptions dyn;
  dyn.max_iter = opts.max_iter;
  dyn.eps_fp = opts.eps_fp;
  dyn.eps_eq = opts.eps_eq;
  dyn.eps_tie = opts.eps_tie;
  dyn.order = opts.player_order;
  MetricsOptions mopts;
  mopts.grid_step = opts.grid_step;
  mopts.eps_eq = opts.eps_eq;
  mopts.dynamics = dyn;
  mopts.dynamics.record_trace = false;

  const LbNetwork canon = canonical_network();
  const DocMatrix selfish2 = DocMatrix::selfish(2);

  // Best-response trace from pure-local routing.
  {
    const DynamicsResult d = br_dynamics(canon, selfish2, pure_local(canon), dyn);
    std::ofstream csv(out_dir / "trace.csv", std::ios::binary);
    csv << "round,x_1,x_2,J_1,J_2\n";
    for (const auto& t : d.trace) {
      csv << t.round << "," << format_number(t.local_flows[0]) << "," << format_number(t.local_flows[1]) << ","
          << format_number(t.actual_costs[0]) << "," << format_number(t.actual_costs[1]) << "\n";
    }
    const auto& first = d.trace.front().actual_costs;
    claim("trace_initial_costs", "initial costs at pure-local routing are {L, L}", list(first), "(0.1, 0.1)",
          near(first[0], 0.1, 1e-12) && near(first[1], 0.1, 1e-12));
    const auto& last = d.result.local_flows;
    claim("trace_final_flows", "best-response dynamics settles near (r/2, r/2)",
          list(last) + " after " + std::to_string(d.result.iterations) + " rounds", "within 0.01 of (0.5, 0.5)",
          d.result.converged && near(last[0], 0.5, 0.01) && near(last[1], 0.5, 0.01));
  }

  // Unique symmetric selfish equilibrium.
  {
    const EquilibriumResult ne = closed_form_selfish_ne(canon);
    const bool verified = verify_equilibrium(canon, selfish2, ne.local_flows, opts.eps_eq).pass;
    claim("selfish_ne_closed_form", "selfish equilibrium local flow r/2 + zeta and cost rL + (r/2 - zeta)c",
          "x = " + format_number(ne.local_flows[0]) + ", J = " + format_number(ne.actual_costs[0]) +
              ", verified = " + (verified ? "true" : "false"),
          "x = 0.505, J = 0.595, verified = true",
          near(ne.local_flows[0], 0.505, 1e-9) && near(ne.actual_costs[0], 0.595, 1e-9) && verified);

    const DynamicsResult d = br_dynamics(canon, selfish2, pure_local(canon), [&] {
      auto o = dyn;
      o.record_trace = false;
      return o;
    }());
    claim("selfish_ne_dynamics", "best-response dynamics reaches the closed-form equilibrium",
          list(d.result.local_flows), "within 1e-6 of (0.505, 0.505)",
          d.result.verified && near(d.result.local_flows[0], 0.505, 1e-6) && near(d.result.local_flows[1], 0.505, 1e-6));

    const auto grid = grid_oracle_ne(canon, selfish2, 1e-3, opts.eps_eq);
    std::string computed = std::to_string(grid.size()) + " cluster(s)";
    if (!grid.empty()) computed += ", first at " + list(grid.front().local_flows);
    claim("selfish_ne_unique_grid", "brute-force grid search finds a single equilibrium", computed,
          "1 cluster within 1e-3 of (0.505, 0.505)",
          grid.size() == 1 && near(grid.front().local_flows[0], 0.505, 1e-3) &&
              near(grid.front().local_flows[1], 0.505, 1e-3));
  }

  // Price of anarchy on the canonical net and over the sequence.
  const PoaReport canon_poa = price_of_anarchy(canon, mopts);
  claim("poa_canonical", "PoA = 1 + (r/2 - zeta)c/(rL) matches the simulated worst equilibrium",
        "simulated " + format_number(canon_poa.poa) + ", formula " + format_number(*canon_poa.closed_form_poa),
        "5.95 with |simulated - formula| < 1e-9", near(canon_poa.poa, 5.95, 1e-9) && canon_poa.formula_agrees);

  const ParamSequence seq{0.1, 2.0, 0.1, 1.0};
  const auto rows = sweep_sequence(seq, 2, 6, 2, compact_beta_grid(2), mopts);
  std::ofstream(out_dir / "sweep.csv", std::ios::binary) << sweep_table(rows);
  std::vector<double> poas, vous;
  bool agree = true, wardrop_ok = true, vou_ok = true;
  std::vector<double> wardrop_poas;
  for (const auto& r : rows) {
    poas.push_back(r.poa.poa);
    agree = agree && r.poa.formula_agrees;
    wardrop_poas.push_back(r.wardrop.poa);
    wardrop_ok = wardrop_ok && near(r.wardrop.poa, 1.0, 1e-9) && r.wardrop.local_only;
    vous.push_back(r.vou.available ? r.vou.vou : std::nan(""));
    vou_ok = vou_ok && r.vou.available;
  }
  claim("poa_unbounded", "PoA grows without bound along the sequence (m = 2..6)", list(poas),
        "strictly increasing, formula agreement, > 100 at m = 6",
        strictly_increasing(poas) && agree && poas.back() > 100.0);

  // Wardrop equilibrium.
  {
    const WardropPoaReport w = wardrop_price_of_anarchy(canon);
    claim("wardrop_canonical", "non-atomic equilibrium routes locally with per-source cost rL",
          "PoA " + format_number(w.poa) + ", local only = " + (w.local_only ? "true" : "false"),
          "PoA 1, local only = true", near(w.poa, 1.0, 1e-9) && w.local_only);
    claim("wardrop_sequence", "Wardrop PoA equals 1 for every m", list(wardrop_poas), "all 1 within 1e-9, local only",
          wardrop_ok);
  }

  // Value of unilateral altruism.
  {
    const VouReport v = value_of_unilateral_altruism(canon, 0, default_beta_grid(2), mopts);
    claim("vou_canonical", "VoU(1) from the best altruistic equilibrium, at least the analytic lower bound",
          "VoU " + format_number(v.vou) + ", altruist cost " + format_number(v.altruistic_best_cost) + ", bound " +
              format_number(*v.paper_lower_bound),
          "VoU 2.975 +- 1e-6, altruist cost 0.2 = 2rL",
          v.available && near(v.vou, 2.975, 1e-6) && near(v.altruistic_best_cost, 0.2, 1e-9) &&
              v.vou >= *v.paper_lower_bound - 1e-6);
    claim("vou_unbounded", "VoU grows without bound along the sequence (m = 2..6)", list(vous),
          "strictly increasing, VoU(m=6) > 10 VoU(m=2)",
          vou_ok && strictly_increasing(vous) && vous.back() > 10.0 * vous.front());

    const SpilloverReport sp = altruism_benefit_spillover(canon, 0, 0.75, opts.eps_eq);
    claim("spillover", "the selfish player also gains when player 1 is altruistic (beta = 0.75)",
          sp.applicable ? list(sp.deltas) : std::string("not applicable"), "(0.395, 0.5938)",
          sp.applicable && near(sp.deltas[0], 0.395, 1e-9) && near(sp.deltas[1], 0.5938, 1e-9));
  }

  // Gamma set for two players.
  {
    const auto profile = load_taker_profile(canon, 0);
    const double measured = gamma_threshold(canon, opts.eps_eq);
    const double margin = 10.0 * opts.eps_eq;
    const double band_lo = std::min(measured, 0.5) - margin;
    const double band_hi = std::max(measured, 0.5) + margin;
    std::ofstream csv(out_dir / "beta_sweep.csv", std::ios::binary);
    csv << "beta,verified,max_gain,J_1,J_2,asserted\n";
    const auto costs = reduced_costs(canon, profile);
    bool ok = true;
    for (int k = 1; k <= 100; ++k) {
      const double beta = k / 100.0;
      const VerifyResult vr = verify_equilibrium(canon, DocMatrix::altruistic(2, 0, beta), profile, opts.eps_eq);
      const bool asserted = beta < band_lo || beta > band_hi;
      if (asserted) ok = ok && vr.pass == (beta > band_hi);
      csv << format_number(beta) << "," << (vr.pass ? 1 : 0) << "," << format_number(vr.max_gain) << ","
          << format_number(costs[0]) << "," << format_number(costs[1]) << "," << (asserted ? 1 : 0) << "\n";
    }
    std::ostringstream computed;
    computed << "threshold " << format_number(measured) << ", unasserted band [" << format_number(band_lo) << ", "
             << format_number(band_hi) << "]";
    claim("gamma_two_players", "(r, r - delta) is an equilibrium exactly for beta above the threshold",
          computed.str(), "passes above 1/2 + margin, fails below the band", ok && measured <= 0.5 + margin);
  }

  // n-player checks.
  {
    std::ofstream csv(out_dir / "gamma.csv", std::ios::binary);
    csv << "n,symmetric_ne,threshold,altruist_cost,selfish_cost\n";
    for (int n : opts.n_players) {
      const LbNetwork net = canonical_network(n);
      const double expected = 1.0 / n + (n - 1) * 1.0 / (n * 100.0);
      const EquilibriumResult ne = closed_form_selfish_ne(net);
      auto quiet = dyn;
      quiet.record_trace = false;
      const DynamicsResult d = br_dynamics(net, DocMatrix::selfish(n), pure_local(net), quiet);
      bool dyn_ok = d.result.verified;
      for (double x : d.result.local_flows) dyn_ok = dyn_ok && near(x, ne.local_flows[0], 1e-6);
      claim("symmetric_ne_n" + std::to_string(n), "symmetric selfish equilibrium for n players",
            "closed form " + format_number(ne.local_flows[0]) + ", dynamics " + list(d.result.local_flows),
            "r/n + (n-1)c/(n L/delta) = " + format_number(expected),
            near(ne.local_flows[0], expected, 1e-9) && ne.verified && dyn_ok);

      const double measured = gamma_threshold(net, opts.eps_eq);
      const double corrected = (n - 1.0) / n;
      const auto costs = reduced_costs(net, load_taker_profile(net, 0));
      csv << n << "," << format_number(ne.local_flows[0]) << "," << format_number(measured) << ","
          << format_number(costs[0]) << "," << format_number(costs[1]) << "\n";
      const double margin = 10.0 * opts.eps_eq;
      const double band_lo = corrected - 0.05 - margin;
      const double band_hi = corrected + margin;
      const auto taker = load_taker_profile(net, 0);
      const bool passes_above = verify_equilibrium(net, DocMatrix::altruistic(n, 0, std::min(1.0, band_hi + 1e-6)),
                                                   taker, opts.eps_eq).pass;
      const bool fails_below = !verify_equilibrium(net, DocMatrix::altruistic(n, 0, band_lo), taker, opts.eps_eq).pass;
      std::ostringstream computed;
      computed << "threshold " << format_number(measured) << ", unasserted band [" << format_number(band_lo) << ", "
               << format_number(band_hi) << "], altruist cost " << format_number(costs[0]);
      claim("gamma_n" + std::to_string(n), "load-taker profile threshold for n players", computed.str(),
            "passes above (n-1)/n = " + format_number(corrected) + " + margin, fails below the band, altruist cost nrL",
            passes_above && fails_below && near(costs[0], n * 0.1, 1e-9));
    }
  }

  rep.notes = {
      {"poa_prose", "The prose estimate 'PoA ~ 50' for the canonical example disagrees with its own figures "
                    "(0.55 vs 0.1 gives 5.5); the closed form with c = 1 gives 5.95, which is what is checked."},
      {"altruist_cost_n_players", "The n-player altruistic cost is stated as rL; at the load-taker profile the "
                                  "altruist carries n r L (0.3 for n = 3)."},
      {"symmetric_ne_n_players", "The n-player symmetric equilibrium is stated as r/2 + zeta; with equal split over "
                                 "cross links it is r/n + (n-1)c/(n L/delta) (0.34 for n = 3), and r/2 + zeta "
                                 "admits a profitable deviation for n >= 3."},
      {"gamma_n_players", "The n-player altruism set is stated as (1/n, 1]; the measured threshold approaches "
                          "(n-1)/n (see gamma.csv)."},
  };

  std::ofstream report(out_dir / "report.txt", std::ios::binary);
  for (const auto& c : rep.claims) {
    report << "[claim " << c.id << "]\n";
    report << "status = " << (c.pass ? "PASS" : "FAIL") << "\n";
    report << "description = " << c.description << "\n";
    report << "computed = " << c.computed << "\n";
    report << "expected = " << c.expected << "\n\n";
  }
  for (const auto& [id, text] : rep.notes) {
    report << "[discrepancy " << id << "]\n" << "text = " << text << "\n\n";
  }
  report << "claims_passed = " << rep.claims.size() - static_cast<std::size_t>(rep.failures()) << "/"
         << rep.claims.size() << "\n";
  report << "discrepancy_notes = " << rep.notes.size() << "\n";
  return rep;
}

}  // namespace altroute
