#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "frachardy/errors.hpp"
#include "frachardy/scenario.hpp"
#include "frachardy/spectral.hpp"

using namespace frachardy;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("frachardy_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("domain spec parsing: happy paths and error codes") {
  const Domain iv = parse_domain_spec(R"({"type":"interval","a":0,"b":1})");
  CHECK(iv.kind() == Domain::Kind::Interval);
  CHECK(iv.volume() == doctest::Approx(1.0));

  const Domain dk = parse_domain_spec(R"({"type":"disk","center":[0,0],"radius":2})");
  CHECK(dk.kind() == Domain::Kind::Disk);

  try {
    parse_domain_spec(R"({"type":"disk","center":[0,0],"radius":-1})");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ERR_DOMAIN_BAD_SHAPE);
    CHECK(std::string(e.what()).find("radius must be positive") != std::string::npos);
  }
  try {
    parse_domain_spec(R"({"type":"banana"})");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ERR_DOMAIN_UNKNOWN_TYPE);
  }
  try {
    parse_domain_spec(R"({"type":"polygon","vertices":[[0,0],[1,1],[1,0],[0,1]]})");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ERR_DOMAIN_BAD_POLYGON);
  }
}

TEST_CASE("domain spec round trip") {
  for (const std::string spec :
       {std::string(R"({"type":"interval","a":-1.5,"b":2.25})"),
        std::string(R"({"type":"disk","center":[0.5,-1],"radius":0.75})"),
        std::string(R"({"type":"convex_polygon","vertices":[[0,0],[1,0],[1,1],[0,1]]})"),
        std::string(
            R"({"type":"polygon","vertices":[[0,0],[1,0],[1,0.5],[0.5,0.5],[0.5,1],[0,1]]})")}) {
    const Domain d = parse_domain_spec(spec);
    const Domain d2 = parse_domain_spec(serialize_domain(d));
    CHECK(d2.kind() == d.kind());
    CHECK(d2.volume() == doctest::Approx(d.volume()).epsilon(1e-14));
    CHECK(serialize_domain(d2) == serialize_domain(d));
  }
}

TEST_CASE("run_scenario: empty s list yields an empty report list") {
  const fs::path dir = temp_dir("empty");
  {
    std::ofstream out(dir / "domain.json");
    out << R"({"type":"interval","a":0,"b":1})";
  }
  ScenarioConfig cfg;
  cfg.domain_spec = (dir / "domain.json").string();
  cfg.s_values = {};
  cfg.outputs = (dir / "out").string();
  const auto cells = run_scenario(cfg);
  CHECK(cells.empty());
}

TEST_CASE("run_scenario reproduces the module-level values and is byte-deterministic") {
  const fs::path dir = temp_dir("det");
  {
    std::ofstream out(dir / "domain.json");
    out << R"({"type":"interval","a":0,"b":1})";
  }
  ScenarioConfig cfg;
  cfg.domain_spec = (dir / "domain.json").string();
  cfg.s_values = {0.6, 0.75};
  cfg.mesh_n = 64;
  cfg.seed = 7;
  cfg.jobs = 1;

  cfg.outputs = (dir / "out1").string();
  const auto cells1 = run_scenario(cfg);
  cfg.outputs = (dir / "out2").string();
  const auto cells2 = run_scenario(cfg);

  REQUIRE(cells1.size() == 2);
  CHECK(cells1[0].ok);
  CHECK(cells1[1].ok);

  // the summary reproduces a direct solve
  const Domain d = parse_domain_spec(R"({"type":"interval","a":0,"b":1})");
  const AssembledProblem prob =
      assemble_problem(mesh_interval(64), d, {1, 0.75, 0.0});
  CHECK(cells1[1].report.mu_discrete == doctest::Approx(mu_estimate(prob)).epsilon(1e-12));

  // identical bytes across the two runs
  for (const auto& entry : fs::directory_iterator(dir / "out1")) {
    const fs::path other = dir / "out2" / entry.path().filename();
    REQUIRE(fs::exists(other));
    CHECK(slurp(entry.path()) == slurp(other));
  }
  // file inventory
  CHECK(fs::exists(dir / "out1" / "constants.csv"));
  CHECK(fs::exists(dir / "out1" / "jcurve_0.75.csv"));
  CHECK(fs::exists(dir / "out1" / "geometry_0.6.csv"));
  CHECK(fs::exists(dir / "out1" / "summary.json"));
  CHECK(fs::exists(dir / "out1" / "lambda_star_vs_s.dat"));
}

TEST_CASE("an explicit lambda grid overrides the curve shifts") {
  const fs::path dir = temp_dir("lgrid");
  {
    std::ofstream out(dir / "domain.json");
    out << R"({"type":"interval","a":0,"b":1})";
  }
  ScenarioConfig cfg;
  cfg.domain_spec = (dir / "domain.json").string();
  cfg.s_values = {0.75};
  cfg.mesh_n = 32;
  cfg.lambda_grid = {-1.0, 0.0, 1.0};
  cfg.outputs = (dir / "out").string();
  const auto cells = run_scenario(cfg);
  REQUIRE(cells.size() == 1);
  std::stringstream ss(slurp(dir / "out" / "jcurve_0.75.csv"));
  std::string line;
  std::getline(ss, line);  // header
  int rows = 0;
  double at_zero = 0.0;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    ++rows;
    if (line.substr(0, 2) == "0,") at_zero = std::stod(line.substr(2));
  }
  CHECK(rows == 3);
  CHECK(at_zero == doctest::Approx(cells[0].report.mu_discrete).epsilon(1e-12));
}

TEST_CASE("plot data: one comment row plus the curve rows; reference value present") {
  const fs::path dir = temp_dir("plot");
  HardyReport r;
  r.s = 0.75;
  r.h_reference = 0.0620412648125592;
  for (int k = 0; k < 33; ++k) r.j_curve.emplace_back(k * 0.1, 1.0 - 0.05 * k);
  emit_plot_data(r, dir.string());
  const std::string text = slurp(dir / "jcurve_0.75.dat");
  int rows = 0, comments = 0;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') ++comments;
    else ++rows;
  }
  CHECK(rows == 33);
  CHECK(comments == 1);
  CHECK(text.find(fmt_g17(r.h_reference)) != std::string::npos);
}

TEST_CASE("lambda_star_vs_s file is sorted ascending in s") {
  const fs::path dir = temp_dir("sorted");
  {
    std::ofstream out(dir / "domain.json");
    out << R"({"type":"interval","a":0,"b":1})";
  }
  ScenarioConfig cfg;
  cfg.domain_spec = (dir / "domain.json").string();
  cfg.s_values = {0.9, 0.55, 0.75};  // deliberately unsorted
  cfg.mesh_n = 32;
  cfg.mesh_n = 64;
  cfg.outputs = (dir / "out").string();
  run_scenario(cfg);
  std::stringstream ss(slurp(dir / "out" / "lambda_star_vs_s.dat"));
  std::string line;
  double prev = -1.0;
  int rows = 0;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    const double s = std::stod(line.substr(0, line.find(' ')));
    CHECK(s > prev);
    prev = s;
    ++rows;
  }
  CHECK(rows == 3);
}
