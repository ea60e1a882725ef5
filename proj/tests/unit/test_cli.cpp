#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int exit_code;
  fs::path out;
};

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("seg_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

int run_segsolve(const std::string& args) {
  const std::string cmd = std::string("\"") + SEG_SEGSOLVE + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Run segsolve(const std::string& name, const std::string& command, const fs::path& scenario,
             const std::string& extra = "") {
  const fs::path out = fresh_dir(name);
  const int code = run_segsolve(command + " -s \"" + scenario.string() + "\" -o \"" + out.string() + "\" " + extra);
  return {code, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> csv_rows(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

fs::path write_scenario(const std::string& name, const seg::ScenarioConfig& cfg) {
  const fs::path p = fs::temp_directory_path() / ("seg_cli_" + name + ".json");
  std::ofstream(p) << seg::scenario_to_json(cfg).dump(2);
  return p;
}

}  // namespace

TEST_CASE("missing scenario exits 1 without outputs") {
  const Run r = segsolve("missing", "solve", "/nonexistent/scenario.json");
  CHECK(r.exit_code == 1);
  CHECK_FALSE(fs::exists(r.out));
}

TEST_CASE("best response with start at the target is empty") {
  const Run r = segsolve("same", "best-response", seg::test::shipped_scenario("example1"),
                         "--grid 30 --lambda 0.5,0.5 --start 0.5,0.5 --target 0.5,0.5");
  REQUIRE(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(slurp(r.out / "best_response.json"));
  CHECK(doc["steps"] == 0);
  CHECK(doc["arrival_time"] == 0.0);
  for (const auto& J : doc["costs"]) CHECK(J == 0.0);
  CHECK(csv_rows(r.out / "trajectory.csv").size() == 1);
}

TEST_CASE("visibility debug on an open scene with a full sensor sees everything") {
  seg::ScenarioConfig cfg = seg::test::open_config(16, 0.5);
  const fs::path scenario = write_scenario("open", cfg);
  const Run r = segsolve("open", "visibility-debug", scenario, "--stride 4");
  REQUIRE(r.exit_code == 0);
  int dumped = 0;
  for (const auto& entry : fs::directory_iterator(r.out)) {
    if (entry.path().extension() != ".pbm") continue;
    ++dumped;
    const std::string img = slurp(entry.path());
    const std::string header = "P4\n17 17\n";
    REQUIRE(img.compare(0, header.size(), header) == 0);
    for (std::size_t row = 0; row < 17; ++row) {
      const auto* b = reinterpret_cast<const unsigned char*>(img.data() + header.size() + row * 3);
      CHECK(b[0] == 0xff);
      CHECK(b[1] == 0xff);
      CHECK(b[2] == 0x80);
    }
  }
  CHECK(dumped == 3);  // slices 0, 4, 8
}

TEST_CASE("pareto sweep writes one row per weight") {
  const Run r = segsolve("pareto", "pareto", seg::test::shipped_scenario("example2"), "--grid 100 --n-lambdas 11");
  REQUIRE(r.exit_code == 0);
  const auto rows = csv_rows(r.out / "pareto.csv");
  REQUIRE(rows.size() == 11);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].size() == 4);
    CHECK(rows[k][0] == doctest::Approx(0.1 * static_cast<double>(k)));
  }
  // J_1 falls as its weight grows; the endpoint weights are degenerate.
  for (std::size_t k = 2; k + 1 < rows.size(); ++k) CHECK(rows[k][1] <= rows[k - 1][1] * 1.05);
}

TEST_CASE("repeated solves are byte-identical") {
  const std::string args = "--grid 30 --max-iters 8";
  const Run a = segsolve("rep_a", "solve", seg::test::shipped_scenario("example1"), args);
  const Run b = segsolve("rep_b", "solve", seg::test::shipped_scenario("example1"), args);
  REQUIRE((a.exit_code == 0 || a.exit_code == 2));
  CHECK(a.exit_code == b.exit_code);
  int files = 0;
  for (const auto& entry : fs::directory_iterator(a.out)) {
    ++files;
    CHECK(slurp(entry.path()) == slurp(b.out / entry.path().filename()));
  }
  CHECK(files >= 3);
}
