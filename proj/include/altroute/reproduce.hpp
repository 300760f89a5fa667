#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "altroute/game.hpp"

namespace altroute {

struct ReproductionOptions {
  double eps_fp = kEpsFixedPoint;
  double eps_eq = kEpsEq;
  double eps_tie = kEpsTie;
  int max_iter = 1'000'000;
  double grid_step = 1e-2;
  std::vector<int> player_order;
  unsigned long long seed = 0;
  /// Player counts for the n-player checks.
  std::vector<int> n_players{3, 5};
};

struct Claim {
  std::string id;
  std::string description;
  std::string computed;
  std::string expected;
  bool pass = false;
};

struct ReproductionReport {
  std::vector<Claim> claims;
  std::vector<std::pair<std::string, std::string>> notes;  // (id, text)
  int failures() const;
};

/// Runs the fixed suite of checks on the canonical and sequence networks and
/// writes report.txt, trace.csv, sweep.csv, beta_sweep.csv and gamma.csv to
/// `out_dir`.
ReproductionReport emit_paper_reproduction(const std::filesystem::path& out_dir, const ReproductionOptions& opts = {});

}  // namespace altroute
