#pragma once

#include <vector>

#include "altroute/doc_matrix.hpp"
#include "altroute/game.hpp"
#include "altroute/network.hpp"

namespace altroute {

/// A connected cluster of grid profiles (adjacent in every coordinate by at
/// most one grid index) where no player gains more than eps_eq by moving to
/// any other grid point.
struct GridEquilibrium {
  std::vector<double> local_flows;  // member with the smallest max regret
  double max_regret = 0.0;
  std::vector<std::vector<double>> members;
};

/// Uniform grid k*step on [0, r] merged with 0, r, r - delta (elbow local
/// latency) and the symmetric selfish flow (elbow regime only).
std::vector<double> oracle_grid(const LbNetwork& net, double grid_step);

/// Brute-force equilibrium search over equal-split profiles on
/// `oracle_grid`. Limited to n <= 3 and at most 4e6 profiles; throws
/// ConfigError otherwise or for a step outside (0, r/2).
std::vector<GridEquilibrium> grid_oracle_ne(const LbNetwork& net, const DocMatrix& doc, double grid_step,
                                            double eps_eq = kEpsEq);

}  // namespace altroute
