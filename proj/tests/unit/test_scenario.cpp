#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "altroute/errors.hpp"
#include "altroute/scenario.hpp"

using namespace altroute;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("altroute_test_" + name);
  fs::remove_all(d);
  return d;
}

const char* kCanonical = R"(# canonical
n = 2
r = 1
local = elbow L=0.1 delta=0.001
cross = affine a=0 b=1
tasks = nash, opt, poa, wardrop
)";

}  // namespace

TEST_CASE("parse the canonical scenario") {
  const Scenario s = parse_scenario(kCanonical);
  const auto& net = std::get<ExplicitNetworkSpec>(s.network);
  CHECK(net.players == 2);
  CHECK(net.local == LatencyFn::elbow(0.1, 1e-3, 1.0));
  CHECK(net.cross == LatencyFn::affine(0, 1));
  CHECK(s.tasks == std::vector<Task>{Task::Nash, Task::Opt, Task::Poa, Task::Wardrop});
  CHECK(s.doc.kind == DocSpec::Kind::Selfish);
}

TEST_CASE("parse errors name the line and field") {
  auto line_of = [](const std::string& text) {
    try {
      parse_scenario(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  const std::string net = "n = 2\nlocal = elbow L=0.1 delta=0.001\ncross = affine a=0 b=1\n";
  CHECK(line_of(net + "r = 1\nbogus = 3\n") == 5);
  CHECK(line_of(net + "r = -1\n") == 4);
  CHECK(line_of("n = 2\nr = 1\nlocal = wiggly L=1\ncross = affine a=0 b=1\n") == 3);
  CHECK(line_of(net + "r = 1\nn = 3\n") == 5);
  CHECK(line_of(net + "just words\n") == 4);
  CHECK(line_of(net + "r = 1\ndoc = altruistic player=3 beta=0.5\n") == 5);
  CHECK(line_of(net + "r = 1\ntasks = sweep\n") == 5);
  try {
    parse_scenario(net + "r = abc\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("field 'r'") != std::string::npos);
  }
}

TEST_CASE("serialize round-trips") {
  const char* texts[] = {
      kCanonical,
      "n = 3\nr = 2\nlocal = affine a=1.5 b=0.25\ncross = affine a=0.1 b=0\n"
      "doc = altruistic player=2 betas=0.3,0.9\nx0 = 1,2,0.5\neps_eq = 1e-8\nplayer_order = 3,1,2\n",
      "sequence = delta0=0.1 c0=2 L=0.1 r=1\nm_from = 2\nm_to = 4\ntasks = sweep, wardrop\nseed = 17\n",
      "n = 2\nr = 1\nlocal = elbow L=0.1 delta=0.001\ncross = affine a=0 b=1\ndoc = matrix 0.7,0.3;0,1\nx0 = selfish-ne\ntasks = trace\n",
  };
  for (const char* t : texts) {
    const Scenario s = parse_scenario(t);
    const std::string once = serialize_scenario(s);
    CHECK(parse_scenario(once) == s);
    CHECK(serialize_scenario(parse_scenario(once)) == once);
  }
}

TEST_CASE("sequence with m = 1 is outside the regime") {
  const Scenario s = parse_scenario("sequence = delta0=0.1 c0=2 L=0.1 r=1\nm_from = 1\ntasks = poa\n");
  try {
    run_scenario(s, scratch_dir("regime"));
    FAIL("expected a regime error");
  } catch (const RegimeError& e) {
    CHECK(std::string(e.what()).find("c_m < r*L/delta_m") != std::string::npos);
  }
}

TEST_CASE("run writes deterministic outputs") {
  const Scenario s = parse_scenario(kCanonical);
  const fs::path a = scratch_dir("run_a"), b = scratch_dir("run_b");
  const RunSummary ra = run_scenario(s, a);
  run_scenario(s, b);
  CHECK(ra.all_ok());
  for (const char* f : {"nash.txt", "opt.txt", "metrics.txt", "wardrop.txt", "summary.txt"}) {
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const std::string nash = slurp(a / "nash.txt");
  CHECK(nash.find("0.505") != std::string::npos);
  CHECK(slurp(a / "metrics.txt").find("5.95") != std::string::npos);
}

TEST_CASE("trace starts from the given profile") {
  const Scenario s = parse_scenario(
      "n = 2\nr = 1\nlocal = elbow L=0.1 delta=0.001\ncross = affine a=0 b=1\ntasks = trace\nx0 = pure-local\n");
  const fs::path d = scratch_dir("trace");
  CHECK(run_scenario(s, d).all_ok());
  std::istringstream csv(slurp(d / "trace.csv"));
  std::string header, first, line, last;
  std::getline(csv, header);
  std::getline(csv, first);
  while (std::getline(csv, line)) last = line;
  CHECK(header == "m,beta,round,x_1,x_2,J_1,J_2");
  CHECK(first == ",,0,1,1,0.1,0.1");
  std::vector<double> row;
  std::istringstream cells(last.substr(2));
  for (std::string cell; std::getline(cells, cell, ',');) row.push_back(std::stod(cell));
  REQUIRE(row.size() == 5);
  CHECK(row[1] == doctest::Approx(0.505).epsilon(1e-8));
  CHECK(row[4] == doctest::Approx(0.595).epsilon(1e-8));
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(0.505) == "0.505");
  CHECK(format_number(5.95) == "5.95");
}
