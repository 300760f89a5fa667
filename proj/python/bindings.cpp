#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "altroute/best_response.hpp"
#include "altroute/dynamics.hpp"
#include "altroute/equilibrium.hpp"
#include "altroute/errors.hpp"
#include "altroute/grid_oracle.hpp"
#include "altroute/metrics.hpp"
#include "altroute/reproduce.hpp"
#include "altroute/scenario.hpp"
#include "altroute/welfare.hpp"

namespace py = pybind11;
using namespace altroute;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Atomic splittable routing games on load-balancing networks";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
  py::register_exception<RegimeError>(m, "RegimeError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<LatencyFn>(m, "LatencyFn")
      .def_static("affine", &LatencyFn::affine, py::arg("a"), py::arg("b"))
      .def_static("elbow", &LatencyFn::elbow, py::arg("height"), py::arg("width"), py::arg("knee"),
                  py::arg("offset") = 0.0)
      .def("__call__", &LatencyFn::operator())
      .def("kink_points", &LatencyFn::kink_points)
      .def("integral", &LatencyFn::integral);

  py::class_<ParamSequence>(m, "ParamSequence")
      .def(py::init([](double delta0, double c0, double height, double demand) {
             return ParamSequence{delta0, c0, height, demand};
           }),
           py::arg("delta0"), py::arg("c0"), py::arg("L"), py::arg("r"))
      .def("delta", &ParamSequence::delta)
      .def("cross_cost", &ParamSequence::cross_cost);

  py::class_<LbNetwork>(m, "LbNetwork")
      .def(py::init<int, double, LatencyFn, LatencyFn>(), py::arg("n"), py::arg("demand"), py::arg("local"),
           py::arg("cross"))
      .def_property_readonly("players", &LbNetwork::players)
      .def_property_readonly("demand", &LbNetwork::demand)
      .def_property_readonly("link_count", &LbNetwork::link_count);
  m.def("canonical_network", &canonical_network, py::arg("n") = 2, py::arg("cross_cost") = 1.0);
  m.def("make_paper_network", &make_paper_network, py::arg("seq"), py::arg("m"), py::arg("n") = 2);

  py::class_<DocMatrix>(m, "DocMatrix")
      .def(py::init<std::vector<std::vector<double>>>())
      .def_static("selfish", &DocMatrix::selfish)
      .def_static("altruistic", &DocMatrix::altruistic, py::arg("n"), py::arg("altruist"), py::arg("beta"))
      .def("rows", &DocMatrix::rows);

  py::class_<EquilibriumResult>(m, "EquilibriumResult")
      .def_readonly("local_flows", &EquilibriumResult::local_flows)
      .def_readonly("actual_costs", &EquilibriumResult::actual_costs)
      .def_readonly("perceived_costs", &EquilibriumResult::perceived_costs)
      .def_readonly("converged", &EquilibriumResult::converged)
      .def_readonly("verified", &EquilibriumResult::verified)
      .def_readonly("iterations", &EquilibriumResult::iterations)
      .def_readonly("zeta", &EquilibriumResult::zeta)
      .def_property_readonly("method", [](const EquilibriumResult& r) { return to_string(r.method); })
      .def("total_cost", &EquilibriumResult::total_cost);

  m.def("reduced_costs", [](const LbNetwork& net, std::vector<double> x) { return reduced_costs(net, x); });
  m.def("closed_form_selfish_ne", &closed_form_selfish_ne);
  m.def("symmetric_selfish_local_flow", &symmetric_selfish_local_flow);
  m.def("load_taker_profile", &load_taker_profile, py::arg("net"), py::arg("altruist"));
  m.def(
      "best_response",
      [](const LbNetwork& net, const DocMatrix& doc, int player, std::vector<double> x) {
        const BestResponse b = best_response(net, doc, player, x);
        return py::make_tuple(b.local_flow, b.perceived_cost);
      },
      py::arg("net"), py::arg("doc"), py::arg("player"), py::arg("local_flows"));
  m.def(
      "verify_equilibrium",
      [](const LbNetwork& net, const DocMatrix& doc, std::vector<double> x, double eps_eq) {
        const VerifyResult v = verify_equilibrium(net, doc, x, eps_eq);
        return py::make_tuple(v.pass, v.max_gain);
      },
      py::arg("net"), py::arg("doc"), py::arg("local_flows"), py::arg("eps_eq") = kEpsEq);
  m.def(
      "br_dynamics",
      [](const LbNetwork& net, const DocMatrix& doc, std::vector<double> start, int max_iter, double eps_fp) {
        DynamicsOptions o;
        o.max_iter = max_iter;
        o.eps_fp = eps_fp;
        const DynamicsResult d = br_dynamics(net, doc, start, o);
        py::list trace;
        for (const auto& t : d.trace) trace.append(py::make_tuple(t.round, t.local_flows, t.actual_costs));
        return py::make_tuple(d.result, trace);
      },
      py::arg("net"), py::arg("doc"), py::arg("start"), py::arg("max_iter") = 1'000'000,
      py::arg("eps_fp") = kEpsFixedPoint);
  m.def(
      "grid_oracle_ne",
      [](const LbNetwork& net, const DocMatrix& doc, double step) {
        std::vector<std::vector<double>> reps;
        for (const auto& g : grid_oracle_ne(net, doc, step)) reps.push_back(g.local_flows);
        return reps;
      },
      py::arg("net"), py::arg("doc"), py::arg("grid_step"));

  py::class_<SocialOutcome>(m, "SocialOutcome")
      .def_readonly("total_cost", &SocialOutcome::total_cost)
      .def_readonly("per_player", &SocialOutcome::per_player)
      .def_readonly("flows_unique", &SocialOutcome::flows_unique)
      .def_readonly("verifier_gap", &SocialOutcome::verifier_gap)
      .def_property_readonly("method", [](const SocialOutcome& s) { return to_string(s.method); });
  m.def("social_optimum", [](const LbNetwork& net) { return social_optimum(net); });

  py::class_<WardropOutcome>(m, "WardropOutcome")
      .def_readonly("path_flows", &WardropOutcome::path_flows)
      .def_readonly("min_latency", &WardropOutcome::min_latency)
      .def_readonly("per_source_cost", &WardropOutcome::per_source_cost)
      .def_readonly("total_cost", &WardropOutcome::total_cost);
  m.def("wardrop_equilibrium", &wardrop_equilibrium);

  py::class_<PoaReport>(m, "PoaReport")
      .def_readonly("worst_ne_total_cost", &PoaReport::worst_ne_total_cost)
      .def_readonly("opt_total_cost", &PoaReport::opt_total_cost)
      .def_readonly("poa", &PoaReport::poa)
      .def_readonly("closed_form_poa", &PoaReport::closed_form_poa)
      .def_readonly("formula_agrees", &PoaReport::formula_agrees);
  m.def("price_of_anarchy", [](const LbNetwork& net) { return price_of_anarchy(net); });

  py::class_<VouReport>(m, "VouReport")
      .def_readonly("selfish_best_cost", &VouReport::selfish_best_cost)
      .def_readonly("altruistic_best_cost", &VouReport::altruistic_best_cost)
      .def_readonly("vou", &VouReport::vou)
      .def_readonly("beta_at_best", &VouReport::beta_at_best)
      .def_readonly("paper_lower_bound", &VouReport::paper_lower_bound)
      .def_readonly("available", &VouReport::available);
  m.def(
      "value_of_unilateral_altruism",
      [](const LbNetwork& net, int player, std::vector<double> betas) {
        return value_of_unilateral_altruism(net, player, std::move(betas));
      },
      py::arg("net"), py::arg("player") = 0, py::arg("beta_grid") = std::vector<double>{});
  m.def(
      "altruism_benefit_spillover",
      [](const LbNetwork& net, int player, double beta) -> py::object {
        const SpilloverReport s = altruism_benefit_spillover(net, player, beta);
        if (!s.applicable) return py::none();
        return py::cast(s.deltas);
      },
      py::arg("net"), py::arg("player"), py::arg("beta"));

  m.def("serialize_scenario", [](const std::string& text) { return serialize_scenario(parse_scenario(text)); },
        "Parse scenario text and return its canonical serialization.");
  m.def(
      "run_scenario",
      [](const std::filesystem::path& path, const std::filesystem::path& out) {
        return run_scenario(load_scenario(path), out).task_status;
      },
      py::arg("path"), py::arg("out_dir"));
  m.def(
      "reproduce",
      [](const std::filesystem::path& out) {
        const ReproductionReport r = emit_paper_reproduction(out);
        std::vector<std::pair<std::string, bool>> claims;
        for (const auto& c : r.claims) claims.emplace_back(c.id, c.pass);
        return claims;
      },
      py::arg("out_dir"));
}
