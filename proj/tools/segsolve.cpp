#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seg/game.hpp"
#include "seg/io.hpp"
#include "seg/observability.hpp"
#include "seg/parallel.hpp"
#include "seg/pareto.hpp"
#include "seg/scenario.hpp"
#include "seg/visibility.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUncertified = 2;

struct CommonOptions {
  std::string scenario;
  std::string out;
  std::optional<int> grid;
  std::optional<int> max_iters;
  std::optional<int> threads;
  std::vector<double> start;
  std::vector<double> target;
  std::string log;
};

// Per-stage wall-clock timings; written to stderr and the optional log file,
// never into result files.
class StageLog {
 public:
  explicit StageLog(std::string path) : path_(std::move(path)), origin_(Clock::now()), last_(origin_) {}

  void stage(const std::string& name) {
    const auto now = Clock::now();
    const double secs = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    lines_.push_back(name + ": " + std::to_string(secs) + " s");
    std::cerr << "[segsolve] " << lines_.back() << "\n";
  }

  void flush() const {
    if (path_.empty()) return;
    std::ofstream out(path_, std::ios::app);
    const double total = std::chrono::duration<double>(Clock::now() - origin_).count();
    for (const auto& l : lines_) out << l << "\n";
    out << "total: " << total << " s\n";
  }

 private:
  using Clock = std::chrono::steady_clock;
  std::string path_;
  Clock::time_point origin_;
  Clock::time_point last_;
  std::vector<std::string> lines_;
};

seg::Vec2 point_option(const std::vector<double>& v, const char* name) {
  if (v.size() != 2) throw std::invalid_argument(std::string(name) + " expects two comma-separated numbers");
  return {v[0], v[1]};
}

seg::Scenario load(const CommonOptions& opt) {
  if (opt.threads) {
    if (*opt.threads < 1) throw std::invalid_argument("--threads must be positive");
    seg::set_thread_count(*opt.threads);
  }
  seg::ScenarioConfig cfg = seg::read_scenario_config(opt.scenario);
  if (opt.grid) seg::apply_grid_override(cfg, *opt.grid);
  if (opt.max_iters) cfg.solver.max_iters = *opt.max_iters;
  if (!opt.start.empty()) cfg.start = point_option(opt.start, "--start");
  if (!opt.target.empty()) cfg.target = point_option(opt.target, "--target");
  return seg::Scenario(std::move(cfg));
}

fs::path output_dir(const CommonOptions& opt) {
  if (!opt.out.empty()) return opt.out;
  if (const char* env = std::getenv("SEG_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return fs::current_path();
}

std::string dump_json(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

int cmd_solve(const CommonOptions& opt) {
  StageLog log(opt.log);
  const seg::Scenario scenario = load(opt);
  log.stage("load");
  seg::SurveillanceGame game(scenario);
  log.stage("observability");
  const seg::GameSolution sol = game.solve();
  log.stage("game");

  std::vector<seg::io::OutputFile> files;
  files.push_back({"solution.json", dump_json(seg::io::solution_json(scenario, sol))});
  for (std::size_t a = 0; a < sol.evader.support.size(); ++a) {
    files.push_back({"traj_" + std::to_string(a) + ".csv", seg::io::trajectory_csv(sol.evader.support[a].trajectory)});
  }
  files.push_back({"ascent.csv", seg::io::ascent_csv(sol.ascent)});
  seg::io::write_outputs(output_dir(opt), files);
  log.stage("write");
  log.flush();

  if (!sol.certificate.certified) {
    std::cerr << "warning: equilibrium not certified (support residual " << sol.certificate.support_residual
              << ", deviation residual " << sol.certificate.deviation_residual << ", optimality residual "
              << sol.certificate.optimality_residual << ")\n";
    return kExitUncertified;
  }
  return kExitOk;
}

int cmd_best_response(const CommonOptions& opt, const std::vector<double>& lambda, int dump_stride) {
  StageLog log(opt.log);
  const seg::Scenario scenario = load(opt);
  if (static_cast<int>(lambda.size()) != scenario.patrol_count()) {
    throw std::invalid_argument("--lambda needs one weight per patrol (" + std::to_string(scenario.patrol_count()) + ")");
  }
  const seg::ObserverPolicy policy = seg::project_simplex(lambda);
  log.stage("load");
  seg::SurveillanceGame game(scenario);
  log.stage("observability");
  const seg::BestResponse br = game.best_response(policy);
  log.stage("best response");

  std::vector<seg::io::OutputFile> files;
  files.push_back({"best_response.json", dump_json(seg::io::best_response_json(scenario, policy, br))});
  files.push_back({"trajectory.csv", seg::io::trajectory_csv(br.trajectory)});
  if (dump_stride > 0) {
    const seg::ValueFunction& u = game.last_value_function();
    std::vector<int> slices;
    for (int k = 0; k <= scenario.time().steps(); k += dump_stride) slices.push_back(k);
    files.push_back({"value.bin", seg::io::value_dump(u, slices)});
    const double vmax = std::max(br.value, 1e-12) * 4.0;
    for (int k : slices) {
      std::vector<double> values(u.slice(k).begin(), u.slice(k).end());
      files.push_back({"value_k" + std::to_string(k) + ".pgm", seg::io::pgm16_image(scenario.grid(), values, vmax)});
    }
  }
  seg::io::write_outputs(output_dir(opt), files);
  log.stage("write");
  log.flush();
  return kExitOk;
}

int cmd_pareto(const CommonOptions& opt, int n_lambdas, const std::vector<int>& pair, bool filter) {
  StageLog log(opt.log);
  const seg::Scenario scenario = load(opt);
  if (pair.size() != 2) throw std::invalid_argument("--pair expects two patrol numbers");
  log.stage("load");
  seg::SurveillanceGame game(scenario);
  log.stage("observability");
  const int i = pair[0] - 1;
  const int j = pair[1] - 1;
  std::vector<seg::ParetoPoint> points = seg::sweep_pareto(game, n_lambdas, i, j);
  if (filter) points = seg::filter_dominated(std::move(points), 0.0);
  log.stage("sweep");
  const std::vector<seg::io::OutputFile> files{{"pareto.csv", seg::io::pareto_csv(points, i)}};
  seg::io::write_outputs(output_dir(opt), files);
  log.stage("write");
  log.flush();
  return kExitOk;
}

int cmd_visibility_debug(const CommonOptions& opt, int stride, std::optional<int> patrol) {
  StageLog log(opt.log);
  const seg::Scenario scenario = load(opt);
  if (stride < 1) throw std::invalid_argument("--stride must be positive");
  log.stage("load");
  const seg::SensorModel& sensor = scenario.sensor();
  const double k_max = sensor.K0 / 0.1 + sensor.sigma;
  std::vector<int> patrols;
  if (patrol) {
    if (*patrol < 1 || *patrol > scenario.patrol_count()) throw std::invalid_argument("--patrol out of range");
    patrols.push_back(*patrol - 1);
  } else {
    for (int p = 0; p < scenario.patrol_count(); ++p) patrols.push_back(p);
  }

  const seg::Grid2D& g = scenario.grid();
  std::vector<seg::io::OutputFile> files;
  for (int p : patrols) {
    const seg::ObservabilityField field = seg::build_observability_field(scenario, p);
    for (int k = 0; k <= scenario.time().steps(); k += stride) {
      std::vector<std::uint8_t> mask(g.node_count());
      std::vector<double> K(g.node_count());
      for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
        mask[idx] = field.visibility().visible(k, idx) ? 1 : 0;
        K[idx] = field.eval(idx, k);
      }
      const std::string tag = "_p" + std::to_string(p + 1) + "_k" + std::to_string(k);
      files.push_back({"visibility" + tag + ".pbm", seg::io::pbm_image(g, mask)});
      files.push_back({"observability" + tag + ".pgm", seg::io::pgm16_image(g, K, k_max)});
    }
  }
  log.stage("visibility");
  seg::io::write_outputs(output_dir(opt), files);
  log.stage("write");
  log.flush();
  return kExitOk;
}

void add_common(CLI::App* sub, CommonOptions& opt) {
  sub->add_option("-s,--scenario", opt.scenario, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
  sub->add_option("-o,--out", opt.out, "Output directory (default: $SEG_OUTPUT_DIR, else the working directory)");
  sub->add_option("--grid", opt.grid, "Override nodes per side; dt is rescaled to keep dt/h")->check(CLI::Range(2, 4096));
  sub->add_option("--max-iters", opt.max_iters, "Override the ascent iteration cap")->check(CLI::NonNegativeNumber);
  sub->add_option("--threads", opt.threads, "Worker thread cap")->check(CLI::PositiveNumber);
  sub->add_option("--start", opt.start, "Override the evader start x,y")->delimiter(',')->expected(2);
  sub->add_option("--target", opt.target, "Override the evader target x,y")->delimiter(',')->expected(2);
  sub->add_option("--log", opt.log, "Append stage timings to this file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surveillance-evasion game solver"};
  app.require_subcommand(1);

  CommonOptions opt;
  auto* solve = app.add_subcommand("solve", "Compute the Nash equilibrium (solution.json, traj_<k>.csv, ascent.csv)");
  add_common(solve, opt);

  std::vector<double> lambda;
  int dump_stride = 0;
  auto* best = app.add_subcommand("best-response", "Evader best response to a fixed observer mixture");
  add_common(best, opt);
  best->add_option("--lambda", lambda, "Observer weights, comma separated")->delimiter(',')->required();
  best->add_option("--dump-value", dump_stride, "Also dump every k-th value-function slice (0: off)")
      ->check(CLI::NonNegativeNumber);

  int n_lambdas = 101;
  std::vector<int> pair{1, 2};
  bool filter = false;
  auto* pareto = app.add_subcommand("pareto", "Weighted-sum sweep along one edge of the policy simplex");
  add_common(pareto, opt);
  pareto->add_option("--n-lambdas", n_lambdas, "Number of weights on the edge")->check(CLI::Range(2, 100000));
  pareto->add_option("--pair", pair, "Patrol numbers i,j (1-based)")->delimiter(',')->expected(2);
  pareto->add_flag("--filter-dominated", filter, "Drop dominated points");

  int stride = 50;
  std::optional<int> patrol;
  auto* vis = app.add_subcommand("visibility-debug", "Dump visibility masks (PBM) and observability (PGM)");
  add_common(vis, opt);
  vis->add_option("--stride", stride, "Dump every k-th time slice");
  vis->add_option("--patrol", patrol, "Only this patrol (1-based)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*solve) return cmd_solve(opt);
    if (*best) return cmd_best_response(opt, lambda, dump_stride);
    if (*pareto) return cmd_pareto(opt, n_lambdas, pair, filter);
    if (*vis) return cmd_visibility_debug(opt, stride, patrol);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
