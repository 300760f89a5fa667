#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "altroute/errors.hpp"
#include "altroute/metrics.hpp"
#include "altroute/reproduce.hpp"
#include "altroute/scenario.hpp"

namespace {

struct Flags {
  std::optional<double> eps_fp;
  std::optional<double> eps_eq;
  std::optional<int> max_iter;
  std::optional<double> grid_step;
  std::vector<int> player_order;  // 1-based
  std::optional<unsigned long long> seed;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--eps-fp,--eps_fp", f.eps_fp, "fixed-point tolerance on flows")->check(CLI::PositiveNumber);
  cmd->add_option("--eps-eq,--eps_eq", f.eps_eq, "equilibrium cost tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter,--max_iter", f.max_iter, "maximum best-response rounds")->check(CLI::PositiveNumber);
  cmd->add_option("--grid-step,--grid_step", f.grid_step, "grid oracle spacing")->check(CLI::PositiveNumber);
  cmd->add_option("--player-order,--player_order", f.player_order, "update order, 1-based, comma separated")
      ->delimiter(',');
  cmd->add_option("--seed", f.seed, "seed for randomized verifier starts");
}

std::vector<int> zero_based(const std::vector<int>& order) {
  std::vector<int> out;
  for (int p : order) out.push_back(p - 1);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace altroute;
  CLI::App app{"Atomic splittable routing on load-balancing networks"};
  app.require_subcommand(1);

  Flags flags;
  std::string scenario_path, out_dir;
  auto* run = app.add_subcommand("run", "run a scenario file");
  run->add_option("scenario", scenario_path, "scenario file")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  add_flags(run, flags);

  auto* repro = app.add_subcommand("reproduce-paper", "run the fixed reproduction suite");
  repro->add_option("--out", out_dir, "output directory")->required();
  std::vector<int> n_players{3, 5};
  repro->add_option("--n", n_players, "player counts for the n-player checks")->delimiter(',');
  add_flags(repro, flags);

  int m_from = 2, m_to = 6, players = 2;
  ParamSequence seq{0.1, 2.0, 0.1, 1.0};
  auto* sweep = app.add_subcommand("sweep", "PoA and VoU along a parameter sequence");
  sweep->add_option("--m-from,--m_from", m_from)->required();
  sweep->add_option("--m-to,--m_to", m_to)->required();
  sweep->add_option("--n", players, "players")->check(CLI::Range(2, 1000));
  sweep->add_option("--delta0", seq.delta0);
  sweep->add_option("--c0", seq.c0);
  sweep->add_option("--L", seq.height);
  sweep->add_option("--r", seq.demand);
  sweep->add_option("--out", out_dir, "output directory (prints to stdout if omitted)");
  add_flags(sweep, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      Scenario s = load_scenario(scenario_path);
      if (flags.eps_fp) s.knobs.eps_fp = *flags.eps_fp;
      if (flags.eps_eq) s.knobs.eps_eq = *flags.eps_eq;
      if (flags.max_iter) s.knobs.max_iter = *flags.max_iter;
      if (flags.grid_step) s.knobs.grid_step = *flags.grid_step;
      if (!flags.player_order.empty()) s.knobs.player_order = zero_based(flags.player_order);
      if (flags.seed) s.seed = *flags.seed;
      const RunSummary summary = run_scenario(s, out_dir);
      for (const auto& [task, status] : summary.task_status) std::cout << task << ": " << status << "\n";
      return summary.all_ok() ? 0 : 3;
    }
    if (*repro) {
      ReproductionOptions o;
      if (flags.eps_fp) o.eps_fp = *flags.eps_fp;
      if (flags.eps_eq) o.eps_eq = *flags.eps_eq;
      if (flags.max_iter) o.max_iter = *flags.max_iter;
      if (flags.grid_step) o.grid_step = *flags.grid_step;
      if (!flags.player_order.empty()) o.player_order = zero_based(flags.player_order);
      if (flags.seed) o.seed = *flags.seed;
      o.n_players = n_players;
      const ReproductionReport rep = emit_paper_reproduction(out_dir, o);
      for (const auto& c : rep.claims) std::cout << (c.pass ? "PASS " : "FAIL ") << c.id << ": " << c.computed << "\n";
      std::cout << rep.notes.size() << " documented discrepancies, see report.txt\n";
      return rep.failures() == 0 ? 0 : 3;
    }
    if (*sweep) {
      MetricsOptions mo;
      if (flags.eps_fp) mo.dynamics.eps_fp = *flags.eps_fp;
      if (flags.eps_eq) mo.eps_eq = *flags.eps_eq;
      if (flags.max_iter) mo.dynamics.max_iter = *flags.max_iter;
      if (flags.grid_step) mo.grid_step = *flags.grid_step;
      if (!flags.player_order.empty()) mo.dynamics.order = zero_based(flags.player_order);
      const auto rows = sweep_sequence(seq, m_from, m_to, players, compact_beta_grid(players), mo);
      const std::string csv = sweep_table(rows);
      if (out_dir.empty()) {
        std::cout << csv;
      } else {
        std::filesystem::create_directories(out_dir);
        std::ofstream(std::filesystem::path(out_dir) / "sweep.csv", std::ios::binary) << csv;
      }
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const RegimeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
