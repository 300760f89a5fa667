#include "altroute/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "altroute/doc_matrix.hpp"
#include "altroute/dynamics.hpp"
#include "altroute/equilibrium.hpp"
#include "altroute/errors.hpp"
#include "altroute/metrics.hpp"
#include "altroute/welfare.hpp"

namespace altroute {

std::string to_string(Task t) {
  switch (t) {
    case Task::Nash: return "nash";
    case Task::Wardrop: return "wardrop";
    case Task::Opt: return "opt";
    case Task::Poa: return "poa";
    case Task::Vou: return "vou";
    case Task::Trace: return "trace";
    case Task::Sweep: return "sweep";
  }
  return "?";
}

int Scenario::players() const {
  return std::visit([](const auto& spec) { return spec.players; }, network);
}

bool RunSummary::all_ok() const {
  return std::all_of(task_status.begin(), task_status.end(), [](const auto& t) { return t.second == "ok"; });
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string sweep_table(const std::vector<SweepRow>& rows) {
  std::ostringstream csv;
  csv << "m,poa,vou,zeta_m,c_m,delta_m,wardrop_poa\n";
  for (const auto& r : rows) {
    csv << r.m << "," << format_number(r.poa.poa) << "," << (r.vou.available ? format_number(r.vou.vou) : "") << ","
        << format_number(r.zeta) << "," << format_number(r.cross_cost) << "," << format_number(r.delta) << ","
        << format_number(r.wardrop.poa) << "\n";
  }
  return csv.str();
}

namespace {

std::string exact(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

struct Line {
  int number = 0;
  std::string value;
};

class Parser {
 public:
  explicit Parser(std::map<std::string, Line> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  int line(const std::string& key) const { return has(key) ? entries_.at(key).number : 0; }
  const std::string& raw(const std::string& key) const { return entries_.at(key).value; }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ParseError(line(key), "field '" + key + "': " + msg);
  }

  double number(const std::string& key, std::string_view text) const {
    double v = 0.0;
    const char* b = text.data();
    const char* e = b + text.size();
    const auto res = std::from_chars(b, e, v);
    if (text.empty() || res.ec != std::errc() || res.ptr != e || !std::isfinite(v)) {
      fail(key, "expected a number, got '" + std::string(text) + "'");
    }
    return v;
  }

  double number(const std::string& key) const { return number(key, raw(key)); }

  int integer(const std::string& key, std::string_view text) const {
    int v = 0;
    const char* b = text.data();
    const char* e = b + text.size();
    const auto res = std::from_chars(b, e, v);
    if (text.empty() || res.ec != std::errc() || res.ptr != e) {
      fail(key, "expected an integer, got '" + std::string(text) + "'");
    }
    return v;
  }

  int integer(const std::string& key) const { return integer(key, raw(key)); }

  std::vector<double> number_list(const std::string& key, std::string_view text) const {
    std::vector<double> out;
    for (const auto& part : split(text, ',')) out.push_back(number(key, part));
    return out;
  }

  /// "kind k=v k=v ..." -> kind and parameters.
  std::pair<std::string, std::map<std::string, double>> tagged(const std::string& key) const {
    const auto w = words(raw(key));
    if (w.empty()) fail(key, "missing value");
    std::map<std::string, double> params;
    const bool has_kind = w.front().find('=') == std::string::npos;
    for (std::size_t k = has_kind ? 1 : 0; k < w.size(); ++k) {
      const auto eq = w[k].find('=');
      if (eq == std::string::npos) fail(key, "expected name=value, got '" + w[k] + "'");
      const std::string name = w[k].substr(0, eq);
      if (params.count(name)) fail(key, "parameter '" + name + "' given twice");
      params[name] = number(key, std::string_view(w[k]).substr(eq + 1));
    }
    return {has_kind ? w.front() : std::string(), params};
  }

 private:
  std::map<std::string, Line> entries_;
};

double take(const Parser& p, const std::string& key, std::map<std::string, double>& params, const std::string& name,
            std::optional<double> fallback = std::nullopt) {
  const auto it = params.find(name);
  if (it == params.end()) {
    if (fallback) return *fallback;
    p.fail(key, "missing parameter '" + name + "'");
  }
  const double v = it->second;
  params.erase(it);
  return v;
}

void reject_leftovers(const Parser& p, const std::string& key, const std::map<std::string, double>& params) {
  if (!params.empty()) p.fail(key, "unknown parameter '" + params.begin()->first + "'");
}

LatencyFn parse_latency(const Parser& p, const std::string& key, double demand) {
  auto [kind, params] = p.tagged(key);
  try {
    if (kind == "elbow") {
      const double h = take(p, key, params, "L");
      const double d = take(p, key, params, "delta");
      const double knee = take(p, key, params, "knee", demand);
      const double offset = take(p, key, params, "offset", 0.0);
      reject_leftovers(p, key, params);
      return LatencyFn::elbow(h, d, knee, offset);
    }
    if (kind == "affine") {
      const double a = take(p, key, params, "a");
      const double b = take(p, key, params, "b");
      reject_leftovers(p, key, params);
      return LatencyFn::affine(a, b);
    }
  } catch (const DomainError& e) {
    p.fail(key, e.what());
  }
  p.fail(key, "latency kind must be 'elbow' or 'affine', got '" + kind + "'");
}

const std::vector<std::string> kKnownKeys = {"n", "r", "local", "cross", "sequence", "m_from", "m_to", "doc",
                                             "tasks", "eps_fp", "eps_eq", "eps_tie", "max_iter", "player_order",
                                             "grid_step", "seed", "x0"};

}  // namespace

Scenario parse_scenario(std::string_view text) {
  std::map<std::string, Line> entries;
  int number = 0;
  for (const auto& raw_line : split(text, '\n')) {
    ++number;
    std::string line = raw_line;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(number, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
      throw ParseError(number, "unknown key '" + key + "'");
    }
    if (entries.count(key)) throw ParseError(number, "key '" + key + "' given twice");
    entries[key] = {number, trim(std::string_view(line).substr(eq + 1))};
  }
  const Parser p(std::move(entries));

  Scenario s;
  const bool explicit_form = p.has("local") || p.has("cross");
  if (explicit_form && p.has("sequence")) {
    p.fail("sequence", "give either local/cross or sequence, not both");
  }
  if (explicit_form) {
    ExplicitNetworkSpec net;
    if (!p.has("n")) throw ParseError(0, "field 'n': required");
    if (!p.has("r")) throw ParseError(0, "field 'r': required");
    if (!p.has("local")) throw ParseError(0, "field 'local': required");
    if (!p.has("cross")) throw ParseError(0, "field 'cross': required");
    if (p.has("m_from") || p.has("m_to")) p.fail(p.has("m_from") ? "m_from" : "m_to", "only valid with sequence");
    net.players = p.integer("n");
    net.demand = p.number("r");
    if (net.players < 2) p.fail("n", "need at least 2 players");
    if (!(net.demand > 0.0)) p.fail("r", "demand must be positive");
    net.local = parse_latency(p, "local", net.demand);
    net.cross = parse_latency(p, "cross", net.demand);
    s.network = net;
  } else if (p.has("sequence")) {
    SequenceNetworkSpec net;
    if (p.has("r")) p.fail("r", "demand is part of the sequence parameters");
    auto [kind, params] = p.tagged("sequence");
    if (!kind.empty()) p.fail("sequence", "unexpected word '" + kind + "'");
    net.seq.delta0 = take(p, "sequence", params, "delta0");
    net.seq.c0 = take(p, "sequence", params, "c0");
    net.seq.height = take(p, "sequence", params, "L");
    net.seq.demand = take(p, "sequence", params, "r");
    reject_leftovers(p, "sequence", params);
    net.players = p.has("n") ? p.integer("n") : 2;
    if (net.players < 2) p.fail("n", "need at least 2 players");
    if (!p.has("m_from")) throw ParseError(0, "field 'm_from': required with sequence");
    net.m_from = p.integer("m_from");
    net.m_to = p.has("m_to") ? p.integer("m_to") : net.m_from;
    if (net.m_to < net.m_from) p.fail("m_to", "must be >= m_from");
    s.network = net;
  } else {
    throw ParseError(0, "no network given: need local/cross or sequence");
  }
  const int n = s.players();

  if (p.has("doc")) {
    const auto w = words(p.raw("doc"));
    if (w.empty()) p.fail("doc", "missing value");
    if (w.front() == "selfish") {
      if (w.size() != 1) p.fail("doc", "selfish takes no parameters");
    } else if (w.front() == "altruistic") {
      s.doc.kind = DocSpec::Kind::Altruistic;
      bool have_player = false;
      for (std::size_t k = 1; k < w.size(); ++k) {
        const auto eq = w[k].find('=');
        if (eq == std::string::npos) p.fail("doc", "expected name=value, got '" + w[k] + "'");
        const std::string name = w[k].substr(0, eq);
        const std::string_view val = std::string_view(w[k]).substr(eq + 1);
        if (name == "player") {
          s.doc.player = p.integer("doc", val) - 1;
          have_player = true;
        } else if (name == "beta" || name == "betas") {
          if (!s.doc.betas.empty()) p.fail("doc", "beta given twice");
          s.doc.betas = p.number_list("doc", val);
        } else {
          p.fail("doc", "unknown parameter '" + name + "'");
        }
      }
      if (!have_player) p.fail("doc", "altruistic needs player=");
      if (s.doc.player < 0 || s.doc.player >= n) p.fail("doc", "player index must be in 1..n");
      if (s.doc.betas.empty()) p.fail("doc", "altruistic needs beta= or betas=");
      for (double b : s.doc.betas) {
        if (!(b > 0.0 && b <= 1.0)) p.fail("doc", "beta values must lie in (0, 1]");
      }
    } else if (w.front() == "matrix") {
      s.doc.kind = DocSpec::Kind::Matrix;
      const std::string body = trim(std::string_view(p.raw("doc")).substr(6));
      for (const auto& row : split(body, ';')) s.doc.matrix.push_back(p.number_list("doc", row));
      if (static_cast<int>(s.doc.matrix.size()) != n) p.fail("doc", "matrix must have n rows");
      try {
        DocMatrix check(s.doc.matrix);
      } catch (const std::exception& e) {
        p.fail("doc", e.what());
      }
    } else {
      p.fail("doc", "expected selfish, altruistic or matrix");
    }
  }

  if (p.has("tasks")) {
    s.tasks.clear();
    for (const auto& name : split(p.raw("tasks"), ',')) {
      std::optional<Task> t;
      for (Task c : {Task::Nash, Task::Wardrop, Task::Opt, Task::Poa, Task::Vou, Task::Trace, Task::Sweep}) {
        if (to_string(c) == name) t = c;
      }
      if (!t) p.fail("tasks", "unknown task '" + name + "'");
      if (std::find(s.tasks.begin(), s.tasks.end(), *t) != s.tasks.end()) p.fail("tasks", "task '" + name + "' listed twice");
      s.tasks.push_back(*t);
    }
    if (std::find(s.tasks.begin(), s.tasks.end(), Task::Sweep) != s.tasks.end() &&
        !std::holds_alternative<SequenceNetworkSpec>(s.network)) {
      p.fail("tasks", "sweep needs a sequence network");
    }
  }

  auto positive = [&](const std::string& key, double& dst) {
    if (!p.has(key)) return;
    dst = p.number(key);
    if (!(dst > 0.0)) p.fail(key, "must be positive");
  };
  positive("eps_fp", s.knobs.eps_fp);
  positive("eps_eq", s.knobs.eps_eq);
  positive("eps_tie", s.knobs.eps_tie);
  positive("grid_step", s.knobs.grid_step);
  if (p.has("max_iter")) {
    s.knobs.max_iter = p.integer("max_iter");
    if (s.knobs.max_iter < 1) p.fail("max_iter", "must be >= 1");
  }
  if (p.has("player_order")) {
    for (const auto& part : split(p.raw("player_order"), ',')) s.knobs.player_order.push_back(p.integer("player_order", part) - 1);
    auto sorted = s.knobs.player_order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < static_cast<int>(sorted.size()); ++i) {
      if (sorted[static_cast<std::size_t>(i)] != i || static_cast<int>(sorted.size()) != n) {
        p.fail("player_order", "must be a permutation of 1..n");
      }
    }
  }
  if (p.has("seed")) {
    const std::string& v = p.raw("seed");
    const auto res = std::from_chars(v.data(), v.data() + v.size(), s.seed);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) p.fail("seed", "expected a non-negative integer");
  }
  if (p.has("x0")) {
    const std::string& v = p.raw("x0");
    if (v == "pure-local") {
      s.x0.kind = StartSpec::Kind::PureLocal;
    } else if (v == "selfish-ne") {
      s.x0.kind = StartSpec::Kind::SelfishNe;
    } else {
      s.x0.kind = StartSpec::Kind::Explicit;
      s.x0.flows = p.number_list("x0", v);
      if (static_cast<int>(s.x0.flows.size()) != n) p.fail("x0", "need one local flow per player");
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

namespace {

std::string latency_text(const LatencyFn& f) {
  if (f.is_affine()) return "affine a=" + exact(f.as_affine().a) + " b=" + exact(f.as_affine().b);
  const Elbow& e = f.as_elbow();
  return "elbow L=" + exact(e.height) + " delta=" + exact(e.width) + " knee=" + exact(e.knee) +
         " offset=" + exact(e.offset);
}

std::string join(const std::vector<double>& v, const char* sep, std::string (*fmt)(double)) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? sep : "") + fmt(v[k]);
  return out;
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  if (const auto* e = std::get_if<ExplicitNetworkSpec>(&s.network)) {
    out << "n = " << e->players << "\n";
    out << "r = " << exact(e->demand) << "\n";
    out << "local = " << latency_text(e->local) << "\n";
    out << "cross = " << latency_text(e->cross) << "\n";
  } else {
    const auto& q = std::get<SequenceNetworkSpec>(s.network);
    out << "n = " << q.players << "\n";
    out << "sequence = delta0=" << exact(q.seq.delta0) << " c0=" << exact(q.seq.c0) << " L=" << exact(q.seq.height)
        << " r=" << exact(q.seq.demand) << "\n";
    out << "m_from = " << q.m_from << "\n";
    out << "m_to = " << q.m_to << "\n";
  }
  switch (s.doc.kind) {
    case DocSpec::Kind::Selfish: out << "doc = selfish\n"; break;
    case DocSpec::Kind::Altruistic:
      out << "doc = altruistic player=" << s.doc.player + 1 << " betas=" << join(s.doc.betas, ",", exact) << "\n";
      break;
    case DocSpec::Kind::Matrix: {
      out << "doc = matrix ";
      for (std::size_t i = 0; i < s.doc.matrix.size(); ++i) out << (i ? "; " : "") << join(s.doc.matrix[i], ",", exact);
      out << "\n";
      break;
    }
  }
  out << "tasks = ";
  for (std::size_t k = 0; k < s.tasks.size(); ++k) out << (k ? "," : "") << to_string(s.tasks[k]);
  out << "\n";
  out << "eps_fp = " << exact(s.knobs.eps_fp) << "\n";
  out << "eps_eq = " << exact(s.knobs.eps_eq) << "\n";
  out << "eps_tie = " << exact(s.knobs.eps_tie) << "\n";
  out << "max_iter = " << s.knobs.max_iter << "\n";
  if (!s.knobs.player_order.empty()) {
    out << "player_order = ";
    for (std::size_t k = 0; k < s.knobs.player_order.size(); ++k) out << (k ? "," : "") << s.knobs.player_order[k] + 1;
    out << "\n";
  }
  out << "grid_step = " << exact(s.knobs.grid_step) << "\n";
  out << "seed = " << s.seed << "\n";
  switch (s.x0.kind) {
    case StartSpec::Kind::PureLocal: out << "x0 = pure-local\n"; break;
    case StartSpec::Kind::SelfishNe: out << "x0 = selfish-ne\n"; break;
    case StartSpec::Kind::Explicit: out << "x0 = " << join(s.x0.flows, ",", exact) << "\n"; break;
  }
  return out.str();
}

namespace {

struct Case {
  std::optional<int> m;
  LbNetwork net;
};

struct DocCase {
  std::optional<double> beta;
  DocMatrix doc;
};

/// key = value blocks separated by blank lines.
class RecordWriter {
 public:
  void begin(const std::string& name, const Case& c, const std::optional<double>& beta = std::nullopt) {
    if (!text_.empty()) text_ += "\n";
    text_ += "[" + name + "]\n";
    if (c.m) field("m", std::to_string(*c.m));
    if (beta) field("beta", *beta);
  }
  void field(const std::string& key, const std::string& v) { text_ += key + " = " + v + "\n"; }
  void field(const std::string& key, double v) { field(key, format_number(v)); }
  void field(const std::string& key, bool v) { field(key, std::string(v ? "true" : "false")); }
  void field(const std::string& key, int v) { field(key, std::to_string(v)); }
  void per_player(const std::string& key, const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) field(key + "_" + std::to_string(i + 1), v[i]);
  }
  bool empty() const { return text_.empty(); }
  void save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    out << text_;
  }

 private:
  std::string text_;
};

std::string csv_optional(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::vector<Case> build_cases(const Scenario& s) {
  std::vector<Case> cases;
  if (const auto* e = std::get_if<ExplicitNetworkSpec>(&s.network)) {
    cases.push_back({std::nullopt, make_lb_network(e->players, e->demand, e->local, e->cross)});
  } else {
    const auto& q = std::get<SequenceNetworkSpec>(s.network);
    for (int m = q.m_from; m <= q.m_to; ++m) cases.push_back({m, make_paper_network(q.seq, m, q.players)});
  }
  return cases;
}

std::vector<DocCase> build_docs(const Scenario& s) {
  const int n = s.players();
  std::vector<DocCase> docs;
  switch (s.doc.kind) {
    case DocSpec::Kind::Selfish: docs.push_back({std::nullopt, DocMatrix::selfish(n)}); break;
    case DocSpec::Kind::Altruistic:
      for (double b : s.doc.betas) docs.push_back({b, DocMatrix::altruistic(n, s.doc.player, b)});
      break;
    case DocSpec::Kind::Matrix: docs.push_back({std::nullopt, DocMatrix(s.doc.matrix)}); break;
  }
  return docs;
}

DynamicsOptions dynamics_options(const SolverKnobs& k, bool trace) {
  DynamicsOptions o;
  o.max_iter = k.max_iter;
  o.eps_fp = k.eps_fp;
  o.eps_eq = k.eps_eq;
  o.eps_tie = k.eps_tie;
  o.order = k.player_order;
  o.record_trace = trace;
  return o;
}

MetricsOptions metrics_options(const SolverKnobs& k) {
  MetricsOptions o;
  o.grid_step = k.grid_step;
  o.eps_eq = k.eps_eq;
  o.dynamics = dynamics_options(k, false);
  return o;
}

std::vector<double> start_flows(const Scenario& s, const LbNetwork& net) {
  switch (s.x0.kind) {
    case StartSpec::Kind::PureLocal: return pure_local(net);
    case StartSpec::Kind::SelfishNe: return closed_form_selfish_ne(net).local_flows;
    case StartSpec::Kind::Explicit: return s.x0.flows;
  }
  return pure_local(net);
}

}  // namespace

RunSummary run_scenario(const Scenario& s, const std::filesystem::path& out_dir) {
  const std::vector<Case> cases = build_cases(s);
  const std::vector<DocCase> docs = build_docs(s);
  const int n = s.players();
  std::filesystem::create_directories(out_dir);

  RunSummary summary;
  RecordWriter nash, wardrop, opt, metrics;
  std::ostringstream trace_csv, sweep_csv;

  for (Task task : s.tasks) {
    std::string status = "ok";
    auto failed = [&](const std::string& why) {
      if (status == "ok") status = "failed: " + why;
    };
    try {
      switch (task) {
        case Task::Nash:
          for (const auto& c : cases) {
            for (const auto& d : docs) {
              EquilibriumResult r;
              if (d.doc.is_selfish() && in_elbow_regime(c.net)) {
                r = closed_form_selfish_ne(c.net);
              } else {
                r = br_dynamics(c.net, d.doc, start_flows(s, c.net), dynamics_options(s.knobs, false)).result;
              }
              nash.begin("nash", c, d.beta);
              nash.field("method", to_string(r.method));
              nash.field("converged", r.converged);
              nash.field("verified", r.verified);
              nash.field("iterations", r.iterations);
              if (!std::isnan(r.zeta)) nash.field("zeta", r.zeta);
              nash.per_player("local_flow", r.local_flows);
              nash.per_player("actual_cost", r.actual_costs);
              nash.per_player("perceived_cost", r.perceived_costs);
              nash.field("total_cost", r.total_cost());
              if (!r.converged) failed("best-response dynamics did not converge within max_iter");
              else if (!r.verified) failed("equilibrium verification failed");
            }
          }
          break;
        case Task::Trace:
          trace_csv << "m,beta,round";
          for (int i = 1; i <= n; ++i) trace_csv << ",x_" << i;
          for (int i = 1; i <= n; ++i) trace_csv << ",J_" << i;
          trace_csv << "\n";
          for (const auto& c : cases) {
            for (const auto& d : docs) {
              const auto res = br_dynamics(c.net, d.doc, start_flows(s, c.net), dynamics_options(s.knobs, true));
              for (const auto& rec : res.trace) {
                trace_csv << (c.m ? std::to_string(*c.m) : "") << "," << csv_optional(d.beta) << "," << rec.round;
                for (double x : rec.local_flows) trace_csv << "," << format_number(x);
                for (double j : rec.actual_costs) trace_csv << "," << format_number(j);
                trace_csv << "\n";
              }
              if (!res.result.converged) failed("best-response dynamics did not converge within max_iter");
            }
          }
          break;
        case Task::Opt:
          for (const auto& c : cases) {
            const SocialOutcome o = social_optimum(c.net);
            opt.begin("opt", c);
            opt.field("method", to_string(o.method));
            opt.field("flows_unique", o.flows_unique);
            opt.per_player("local_flow", local_flows_of(c.net, o.flows));
            opt.per_player("cost", o.per_player);
            opt.field("total_cost", o.total_cost);
            opt.field("verifier_gap", o.verifier_gap);
            std::mt19937_64 rng(s.seed);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            double worst_gap = 0.0;
            constexpr int kRandomStarts = 5;
            for (int k = 0; k < kRandomStarts; ++k) {
              PathFlows y(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
              for (auto& row : y) {
                double total = 0.0;
                for (double& e : row) total += (e = u(rng));
                for (double& e : row) e *= c.net.demand() / total;
              }
              worst_gap = std::max(worst_gap, projected_descent(c.net, y).total_cost - o.total_cost);
            }
            opt.field("random_starts", kRandomStarts);
            opt.field("random_start_worst_gap", worst_gap);
          }
          break;
        case Task::Wardrop:
          for (const auto& c : cases) {
            const WardropOutcome w = wardrop_equilibrium(c.net);
            wardrop.begin("wardrop", c);
            for (int i = 0; i < n; ++i) {
              const std::string src = std::to_string(i + 1);
              for (int j = 0; j < n; ++j) {
                const std::string path = j == i ? "local" : "via_" + std::to_string(j + 1);
                wardrop.field("flow_" + src + "_" + path, w.path_flows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
                wardrop.field("latency_" + src + "_" + path, w.path_latency[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
              }
            }
            wardrop.per_player("min_latency", w.min_latency);
            wardrop.per_player("source_cost", w.per_source_cost);
            wardrop.field("total_cost", w.total_cost);
            wardrop.field("potential", w.potential);
          }
          break;
        case Task::Poa:
          for (const auto& c : cases) {
            const PoaReport p = price_of_anarchy(c.net, metrics_options(s.knobs));
            const WardropPoaReport wp = wardrop_price_of_anarchy(c.net);
            metrics.begin("poa", c);
            metrics.field("worst_ne_total_cost", p.worst_ne_total_cost);
            metrics.field("opt_total_cost", p.opt_total_cost);
            metrics.field("poa", p.poa);
            if (p.closed_form_poa) metrics.field("closed_form_poa", *p.closed_form_poa);
            metrics.field("formula_agrees", p.formula_agrees);
            metrics.field("equilibria_considered", p.equilibria_considered);
            metrics.field("wardrop_total_cost", wp.wardrop_total_cost);
            metrics.field("wardrop_poa", wp.poa);
            metrics.field("wardrop_local_only", wp.local_only);
            if (!p.formula_agrees) failed("simulated PoA disagrees with the closed form");
          }
          break;
        case Task::Vou: {
          const int player = s.doc.kind == DocSpec::Kind::Altruistic ? s.doc.player : 0;
          const std::vector<double> betas = s.doc.kind == DocSpec::Kind::Altruistic ? s.doc.betas : default_beta_grid(n);
          for (const auto& c : cases) {
            const VouReport v = value_of_unilateral_altruism(c.net, player, betas, metrics_options(s.knobs));
            metrics.begin("vou", c);
            metrics.field("player", player + 1);
            metrics.field("available", v.available);
            metrics.field("selfish_best_cost", v.selfish_best_cost);
            if (v.available) {
              metrics.field("altruistic_best_cost", v.altruistic_best_cost);
              metrics.field("vou", v.vou);
              metrics.field("beta_at_best", v.beta_at_best);
              metrics.per_player("best_local_flow", v.best_profile);
            }
            if (v.paper_lower_bound) metrics.field("lower_bound", *v.paper_lower_bound);
            metrics.field("equilibria_considered", v.equilibria_considered);
            if (!v.available) failed("no verified altruistic equilibrium");
          }
          break;
        }
        case Task::Sweep: {
          const auto& q = std::get<SequenceNetworkSpec>(s.network);
          const int player = s.doc.kind == DocSpec::Kind::Altruistic ? s.doc.player : 0;
          const std::vector<double> betas =
              s.doc.kind == DocSpec::Kind::Altruistic ? s.doc.betas : compact_beta_grid(q.players);
          const auto rows = sweep_sequence(q.seq, q.m_from, q.m_to, q.players, betas, metrics_options(s.knobs), player);
          sweep_csv << sweep_table(rows);
          for (const auto& r : rows) {
            if (!r.vou.available) failed("no verified altruistic equilibrium at m = " + std::to_string(r.m));
          }
          break;
        }
      }
    } catch (const std::exception& e) {
      failed(e.what());
    }
    summary.task_status.emplace_back(to_string(task), status);
  }

  if (!nash.empty()) nash.save(out_dir / "nash.txt");
  if (!wardrop.empty()) wardrop.save(out_dir / "wardrop.txt");
  if (!opt.empty()) opt.save(out_dir / "opt.txt");
  if (!metrics.empty()) metrics.save(out_dir / "metrics.txt");
  if (!trace_csv.str().empty()) std::ofstream(out_dir / "trace.csv", std::ios::binary) << trace_csv.str();
  if (!sweep_csv.str().empty()) std::ofstream(out_dir / "sweep.csv", std::ios::binary) << sweep_csv.str();
  std::ofstream sum(out_dir / "summary.txt", std::ios::binary);
  for (const auto& [task, st] : summary.task_status) sum << task << " = " << st << "\n";
  return summary;
}

}  // namespace altroute
