#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "altroute/latency.hpp"

namespace altroute {

/// Absolute tolerance (flow units) for conservation and non-negativity checks.
inline constexpr double kFlowTolerance = 1e-12;

/// Geometric parameter family delta_m = delta0^m, c_m = c0^m used to drive the
/// inefficiency metrics to infinity.
struct ParamSequence {
  double delta0 = 0.1;
  double c0 = 2.0;
  double height = 0.1;  // L
  double demand = 1.0;  // r

  double delta(int m) const;
  double cross_cost(int m) const;
  /// Throws RegimeError unless c_m > L > delta_m > 0 and c_m < r*L/delta_m.
  void check(int m) const;

  friend bool operator==(const ParamSequence&, const ParamSequence&) = default;
};

/// Checks c > L > delta > 0 and c < r*L/delta; throws RegimeError naming the
/// first violated inequality. `suffix` decorates symbol names (e.g. "_m").
void check_lb_regime(double cross_cost, double height, double width, double demand,
                     const std::string& suffix = "");

struct Edge {
  int from = 0;
  int to = 0;
  LatencyFn latency;
};

/// Plain directed graph with one source per player and a common destination.
/// Supports profile validation and cost evaluation only.
struct EdgeListNetwork {
  int nodes = 0;
  std::vector<Edge> edges;
  std::vector<int> sources;  // one per player
  int destination = 0;
  std::vector<double> demands;  // one per player

  int players() const { return static_cast<int>(sources.size()); }
};

/// Symmetric load-balancing network with n sources.
///
/// Nodes 0..n-1 are sources, node n the destination. Link i (i < n) is the
/// local link i -> n. Cross links i -> j (i != j) follow, ordered by i then j.
class LbNetwork {
 public:
  LbNetwork(int n, double demand, LatencyFn local, LatencyFn cross);

  int players() const { return n_; }
  double demand() const { return demand_; }
  const LatencyFn& local_latency() const { return local_; }
  const LatencyFn& cross_latency() const { return cross_; }

  int link_count() const { return n_ * n_; }
  int destination() const { return n_; }
  int local_link(int i) const;
  int cross_link(int i, int j) const;
  bool is_local(int link) const { return link < n_; }
  std::pair<int, int> endpoints(int link) const;
  const LatencyFn& latency(int link) const { return is_local(link) ? local_ : cross_; }
  /// 1-based display name, "l1" or "l12".
  std::string link_name(int link) const;

  EdgeListNetwork to_edge_list() const;

  friend bool operator==(const LbNetwork&, const LbNetwork&) = default;

 private:
  int n_;
  double demand_;
  LatencyFn local_;
  LatencyFn cross_;
};

LbNetwork make_lb_network(int n, double demand, const LatencyFn& local, const LatencyFn& cross);

/// Elbow{L, delta_m, r, 0} on local links and Affine{0, c_m} on cross links.
LbNetwork make_paper_network(const ParamSequence& seq, int m, int n);

/// r = 1, L = 0.1, delta = 1e-3 with constant cross latency `cross_cost`.
LbNetwork canonical_network(int n = 2, double cross_cost = 1.0);

/// Per-player, per-link flow matrix.
class FlowProfile {
 public:
  FlowProfile() = default;
  FlowProfile(int players, int links) : players_(players), links_(links), x_(players * links, 0.0) {}

  int players() const { return players_; }
  int links() const { return links_; }
  double& operator()(int i, int l) { return x_[static_cast<std::size_t>(i * links_ + l)]; }
  double operator()(int i, int l) const { return x_[static_cast<std::size_t>(i * links_ + l)]; }
  std::span<const double> row(int i) const {
    return {x_.data() + static_cast<std::size_t>(i * links_), static_cast<std::size_t>(links_)};
  }
  std::vector<double> link_totals() const;
  /// Largest absolute entry-wise difference.
  double sup_distance(const FlowProfile& other) const;

  friend bool operator==(const FlowProfile&, const FlowProfile&) = default;

 private:
  int players_ = 0;
  int links_ = 0;
  std::vector<double> x_;
};

/// Each player i keeps local_flows[i] on its local link and splits the rest
/// equally over its cross links (each continuing on the receiving local link).
FlowProfile equal_split_profile(const LbNetwork& net, std::span<const double> local_flows);

/// Local-link flow of each player (x[i][local_i]).
std::vector<double> local_flows_of(const LbNetwork& net, const FlowProfile& x);

struct Violation {
  enum class Kind { NegativeFlow, Conservation };
  Kind kind = Kind::Conservation;
  int player = 0;
  int where = 0;         // link index for NegativeFlow, node index for Conservation
  double amount = 0.0;   // signed excess (out - in - supply) or the negative flow
  std::string describe() const;
};

struct ViolationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string describe() const;
};

/// Node conservation and non-negativity for every player. Throws
/// StructuralError when the matrix shape does not match the network.
ViolationReport validate_profile(const EdgeListNetwork& net, const FlowProfile& x,
                                 double tol = kFlowTolerance);
ViolationReport validate_profile(const LbNetwork& net, const FlowProfile& x,
                                 double tol = kFlowTolerance);

}  // namespace altroute
