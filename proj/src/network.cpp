#include "altroute/network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "altroute/errors.hpp"

namespace altroute {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

double ParamSequence::delta(int m) const { return std::pow(delta0, m); }
double ParamSequence::cross_cost(int m) const { return std::pow(c0, m); }

void ParamSequence::check(int m) const {
  if (m < 1) throw RegimeError("sequence index m must be >= 1 (got " + std::to_string(m) + ")");
  if (!(delta0 > 0.0 && delta0 < 1.0)) throw RegimeError("sequence requires 0 < delta0 < 1");
  if (!(c0 > 1.0)) throw RegimeError("sequence requires c0 > 1");
  check_lb_regime(cross_cost(m), height, delta(m), demand, "_m");
}

void check_lb_regime(double c, double height, double width, double demand,
                     const std::string& sfx) {
  const std::string cs = "c" + sfx;
  const std::string ds = "delta" + sfx;
  std::vector<std::string> failed;
  if (!(width > 0.0)) {
    failed.push_back(ds + " > 0 violated (" + ds + "=" + num(width) + ")");
  } else {
    const double bound = demand * height / width;
    if (!(c < bound)) {
      failed.push_back(cs + " < r*L/" + ds + " violated (" + cs + "=" + num(c) + " >= r*L/" + ds +
                       "=" + num(bound) + ")");
    }
  }
  if (!(c > height)) {
    failed.push_back(cs + " > L violated (" + cs + "=" + num(c) + ", L=" + num(height) + ")");
  }
  if (!(height > width)) {
    failed.push_back("L > " + ds + " violated (L=" + num(height) + ", " + ds + "=" + num(width) + ")");
  }
  if (failed.empty()) return;
  std::string msg = "parameter regime: ";
  for (std::size_t k = 0; k < failed.size(); ++k) msg += (k ? "; " : "") + failed[k];
  throw RegimeError(msg);
}

LbNetwork::LbNetwork(int n, double demand, LatencyFn local, LatencyFn cross)
    : n_(n), demand_(demand), local_(std::move(local)), cross_(std::move(cross)) {
  if (n < 2) throw StructuralError("load-balancing network needs n >= 2 players");
  if (!(std::isfinite(demand) && demand > 0.0)) throw DomainError("demand r must be > 0");
}

int LbNetwork::local_link(int i) const {
  if (i < 0 || i >= n_) throw StructuralError("player index out of range");
  return i;
}

int LbNetwork::cross_link(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_ || i == j) {
    throw StructuralError("cross link needs two distinct players in range");
  }
  return n_ + i * (n_ - 1) + (j < i ? j : j - 1);
}

std::pair<int, int> LbNetwork::endpoints(int link) const {
  if (link < 0 || link >= link_count()) throw StructuralError("link index out of range");
  if (link < n_) return {link, n_};
  const int k = link - n_;
  const int i = k / (n_ - 1);
  int j = k % (n_ - 1);
  if (j >= i) ++j;
  return {i, j};
}

std::string LbNetwork::link_name(int link) const {
  const auto [from, to] = endpoints(link);
  if (to == n_) return "l" + std::to_string(from + 1);
  return "l" + std::to_string(from + 1) + std::to_string(to + 1);
}

EdgeListNetwork LbNetwork::to_edge_list() const {
  EdgeListNetwork g;
  g.nodes = n_ + 1;
  g.destination = n_;
  for (int l = 0; l < link_count(); ++l) {
    const auto [from, to] = endpoints(l);
    g.edges.push_back({from, to, latency(l)});
  }
  for (int i = 0; i < n_; ++i) {
    g.sources.push_back(i);
    g.demands.push_back(demand_);
  }
  return g;
}

LbNetwork make_lb_network(int n, double demand, const LatencyFn& local, const LatencyFn& cross) {
  return LbNetwork(n, demand, local, cross);
}

LbNetwork make_paper_network(const ParamSequence& seq, int m, int n) {
  seq.check(m);
  return LbNetwork(n, seq.demand, LatencyFn::elbow(seq.height, seq.delta(m), seq.demand, 0.0),
                   LatencyFn::affine(0.0, seq.cross_cost(m)));
}

LbNetwork canonical_network(int n, double cross_cost) {
  return LbNetwork(n, 1.0, LatencyFn::elbow(0.1, 1e-3, 1.0, 0.0), LatencyFn::affine(0.0, cross_cost));
}

std::vector<double> FlowProfile::link_totals() const {
  std::vector<double> t(static_cast<std::size_t>(links_), 0.0);
  for (int i = 0; i < players_; ++i) {
    for (int l = 0; l < links_; ++l) t[static_cast<std::size_t>(l)] += (*this)(i, l);
  }
  return t;
}

double FlowProfile::sup_distance(const FlowProfile& other) const {
  if (players_ != other.players_ || links_ != other.links_) {
    throw StructuralError("flow profiles of different shape");
  }
  double d = 0.0;
  for (std::size_t k = 0; k < x_.size(); ++k) d = std::max(d, std::abs(x_[k] - other.x_[k]));
  return d;
}

FlowProfile equal_split_profile(const LbNetwork& net, std::span<const double> local_flows) {
  const int n = net.players();
  if (static_cast<int>(local_flows.size()) != n) {
    throw StructuralError("expected one local flow per player");
  }
  FlowProfile x(n, net.link_count());
  for (int i = 0; i < n; ++i) {
    const double p = local_flows[static_cast<std::size_t>(i)];
    const double share = (net.demand() - p) / (n - 1);
    x(i, net.local_link(i)) = p;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      x(i, net.cross_link(i, j)) = share;
      x(i, net.local_link(j)) = share;
    }
  }
  return x;
}

std::vector<double> local_flows_of(const LbNetwork& net, const FlowProfile& x) {
  if (x.players() != net.players() || x.links() != net.link_count()) {
    throw StructuralError("flow profile shape does not match the network");
  }
  std::vector<double> p;
  for (int i = 0; i < net.players(); ++i) p.push_back(x(i, net.local_link(i)));
  return p;
}

std::string Violation::describe() const {
  std::ostringstream os;
  os.precision(12);
  if (kind == Kind::NegativeFlow) {
    os << "player " << player << ": negative flow " << amount << " on link " << where;
  } else {
    os << "player " << player << ": conservation off by " << amount << " at node " << where;
  }
  return os.str();
}

std::string ViolationReport::describe() const {
  if (ok()) return "ok";
  std::string s;
  for (const auto& v : violations) {
    if (!s.empty()) s += "; ";
    s += v.describe();
  }
  return s;
}

ViolationReport validate_profile(const EdgeListNetwork& net, const FlowProfile& x, double tol) {
  const int players = net.players();
  const int links = static_cast<int>(net.edges.size());
  if (x.players() != players || x.links() != links) {
    throw StructuralError("flow profile is " + std::to_string(x.players()) + "x" +
                          std::to_string(x.links()) + ", network expects " +
                          std::to_string(players) + "x" + std::to_string(links));
  }
  ViolationReport report;
  std::vector<double> balance(static_cast<std::size_t>(net.nodes));
  for (int i = 0; i < players; ++i) {
    std::fill(balance.begin(), balance.end(), 0.0);
    for (int l = 0; l < links; ++l) {
      const double f = x(i, l);
      if (f < -tol) report.violations.push_back({Violation::Kind::NegativeFlow, i, l, f});
      const auto& e = net.edges[static_cast<std::size_t>(l)];
      balance[static_cast<std::size_t>(e.from)] += f;
      balance[static_cast<std::size_t>(e.to)] -= f;
    }
    const double r = net.demands[static_cast<std::size_t>(i)];
    for (int v = 0; v < net.nodes; ++v) {
      double supply = 0.0;
      if (v == net.sources[static_cast<std::size_t>(i)]) supply = r;
      if (v == net.destination) supply = -r;
      const double excess = balance[static_cast<std::size_t>(v)] - supply;
      if (std::abs(excess) > tol) {
        report.violations.push_back({Violation::Kind::Conservation, i, v, excess});
      }
    }
  }
  return report;
}

ViolationReport validate_profile(const LbNetwork& net, const FlowProfile& x, double tol) {
  return validate_profile(net.to_edge_list(), x, tol);
}

}  // namespace altroute
