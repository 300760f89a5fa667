#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "altroute/game.hpp"
#include "altroute/latency.hpp"
#include "altroute/metrics.hpp"
#include "altroute/network.hpp"

namespace altroute {

struct ExplicitNetworkSpec {
  int players = 2;
  double demand = 1.0;
  LatencyFn local = LatencyFn::elbow(0.1, 1e-3, 1.0, 0.0);
  LatencyFn cross = LatencyFn::affine(0.0, 1.0);
  friend bool operator==(const ExplicitNetworkSpec&, const ExplicitNetworkSpec&) = default;
};

struct SequenceNetworkSpec {
  ParamSequence seq;
  int players = 2;
  int m_from = 1;
  int m_to = 1;
  friend bool operator==(const SequenceNetworkSpec&, const SequenceNetworkSpec&) = default;
};

struct DocSpec {
  enum class Kind { Selfish, Altruistic, Matrix };
  Kind kind = Kind::Selfish;
  int player = 0;  // altruist, 0-based
  std::vector<double> betas;
  std::vector<std::vector<double>> matrix;
  friend bool operator==(const DocSpec&, const DocSpec&) = default;
};

enum class Task { Nash, Wardrop, Opt, Poa, Vou, Trace, Sweep };
std::string to_string(Task t);

struct StartSpec {
  enum class Kind { PureLocal, SelfishNe, Explicit };
  Kind kind = Kind::PureLocal;
  std::vector<double> flows;
  friend bool operator==(const StartSpec&, const StartSpec&) = default;
};

struct SolverKnobs {
  double eps_fp = kEpsFixedPoint;
  double eps_eq = kEpsEq;
  double eps_tie = kEpsTie;
  int max_iter = 1'000'000;
  std::vector<int> player_order;  // 0-based; empty means natural order
  double grid_step = 1e-2;
  friend bool operator==(const SolverKnobs&, const SolverKnobs&) = default;
};

struct Scenario {
  std::variant<ExplicitNetworkSpec, SequenceNetworkSpec> network;
  DocSpec doc;
  std::vector<Task> tasks{Task::Nash};
  SolverKnobs knobs;
  StartSpec x0;
  unsigned long long seed = 0;
  friend bool operator==(const Scenario&, const Scenario&) = default;

  int players() const;
};

/// Line-oriented `key = value` format; `#` starts a comment. Player indices
/// in the text are 1-based. Throws ParseError carrying the offending line.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Text that parse_scenario maps back to an equal Scenario.
std::string serialize_scenario(const Scenario& s);

struct RunSummary {
  std::vector<std::pair<std::string, std::string>> task_status;  // (task, "ok" | "failed: ...")
  bool all_ok() const;
};

/// Builds every network up front (RegimeError propagates), then runs each
/// task, writing nash.txt, wardrop.txt, opt.txt, metrics.txt, trace.csv,
/// sweep.csv and summary.txt under `out_dir` as the tasks require. A failing
/// task is recorded and the remaining tasks still run.
RunSummary run_scenario(const Scenario& s, const std::filesystem::path& out_dir);

/// Fixed 12-significant-digit rendering used in every output file.
std::string format_number(double v);

/// m,poa,vou,zeta_m,c_m,delta_m,wardrop_poa with a header line.
std::string sweep_table(const std::vector<SweepRow>& rows);

}  // namespace altroute
