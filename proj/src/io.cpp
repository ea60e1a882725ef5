#include "seg/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "seg/scenario.hpp"

namespace seg::io {
namespace {

template <typename T>
void append_le(std::string& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(bytes, sizeof(T));
}

nlohmann::json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json numbers(std::span<const double> v) {
  nlohmann::json out = nlohmann::json::array();
  for (double x : v) out.push_back(number_or_null(x));
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string pbm_image(const Grid2D& grid, std::span<const std::uint8_t> mask) {
  const int w = grid.side();
  std::string out = "P4\n" + std::to_string(w) + " " + std::to_string(w) + "\n";
  const int row_bytes = (w + 7) / 8;
  for (int j = w - 1; j >= 0; --j) {
    std::string row(static_cast<std::size_t>(row_bytes), '\0');
    for (int i = 0; i < w; ++i) {
      if (mask[grid.index(i, j)]) row[static_cast<std::size_t>(i / 8)] |= static_cast<char>(0x80 >> (i % 8));
    }
    out += row;
  }
  return out;
}

std::string pgm16_image(const Grid2D& grid, std::span<const double> values, double max_value) {
  if (!(max_value > 0.0)) throw std::invalid_argument("pgm16_image: max_value must be positive");
  const int w = grid.side();
  std::string out = "P5\n" + std::to_string(w) + " " + std::to_string(w) + "\n65535\n";
  for (int j = w - 1; j >= 0; --j) {
    for (int i = 0; i < w; ++i) {
      const double v = std::clamp(values[grid.index(i, j)] / max_value, 0.0, 1.0);
      const auto level = static_cast<std::uint16_t>(std::lround(v * 65535.0));
      out.push_back(static_cast<char>(level >> 8));
      out.push_back(static_cast<char>(level & 0xff));
    }
  }
  return out;
}

std::string value_dump(const ValueFunction& u, std::span<const int> slices) {
  std::string out = "SEGU";
  append_le<std::uint32_t>(out, 1);
  append_le<std::uint32_t>(out, static_cast<std::uint32_t>(u.grid().n()));
  append_le<std::uint32_t>(out, static_cast<std::uint32_t>(slices.size()));
  append_le<double>(out, u.time().dt());
  for (int k : slices) {
    if (k < 0 || k > u.time().steps()) throw std::out_of_range("value_dump: slice index out of range");
    append_le<std::uint32_t>(out, static_cast<std::uint32_t>(k));
  }
  for (int k : slices) {
    for (float v : u.slice(k)) append_le<float>(out, v);
  }
  return out;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t,x,y\n";
  for (std::size_t m = 0; m < traj.points.size(); ++m) {
    out += format_number(static_cast<double>(m) * traj.dt) + "," + format_number(traj.points[m].x) + "," +
           format_number(traj.points[m].y) + "\n";
  }
  return out;
}

std::string ascent_csv(std::span<const AscentStep> trace) {
  std::string out = "iteration,G";
  const std::size_t r = trace.empty() ? 0 : trace.front().lambda.size();
  for (std::size_t i = 0; i < r; ++i) out += ",lambda_" + std::to_string(i + 1);
  out += "\n";
  for (const auto& step : trace) {
    out += std::to_string(step.iteration) + "," + format_number(step.value);
    for (double l : step.lambda) out += "," + format_number(l);
    out += "\n";
  }
  return out;
}

std::string pareto_csv(std::span<const ParetoPoint> points, int i) {
  std::string out = "lambda_i";
  const std::size_t r = points.empty() ? 0 : points.front().costs.J.size();
  for (std::size_t k = 0; k < r; ++k) out += ",J_" + std::to_string(k + 1);
  out += ",value\n";
  for (const auto& p : points) {
    out += format_number(p.lambda[i]);
    for (double j : p.costs.J) out += "," + format_number(j);
    out += "," + format_number(p.value) + "\n";
  }
  return out;
}

nlohmann::json best_response_json(const Scenario& scenario, const ObserverPolicy& lambda, const BestResponse& br) {
  nlohmann::json doc;
  doc["scenario"] = scenario.config().name;
  doc["lambda"] = lambda.weights();
  doc["value"] = number_or_null(br.value);
  doc["costs"] = numbers(br.costs.J);
  doc["weighted_cost"] = number_or_null(br.costs.weighted(lambda.weights()));
  doc["residual"] = number_or_null(br.residual);
  doc["reached"] = br.trajectory.reached;
  doc["arrival_time"] = br.trajectory.arrival_time();
  doc["steps"] = br.trajectory.steps();
  doc["trajectory"] = "trajectory.csv";
  return doc;
}

nlohmann::json solution_json(const Scenario& scenario, const GameSolution& solution) {
  nlohmann::json doc;
  doc["scenario"] = scenario.config().name;
  doc["grid"] = {{"n", scenario.grid().n()}, {"dt", scenario.time().dt()}, {"T", scenario.time().deadline()}};
  doc["value"] = number_or_null(solution.value);
  doc["lambda_star"] = solution.lambda_star.weights();
  doc["active_patrols"] = solution.evader.active_patrols;

  nlohmann::json trajectories = nlohmann::json::array();
  for (std::size_t a = 0; a < solution.evader.support.size(); ++a) {
    const auto& c = solution.evader.support[a];
    trajectories.push_back({{"file", "traj_" + std::to_string(a) + ".csv"},
                            {"theta", solution.evader.theta[a]},
                            {"costs", numbers(c.costs.J)},
                            {"lambda_star_cost", number_or_null(c.lambda_star_cost)},
                            {"source_lambda", c.source_lambda},
                            {"arrival_time", c.trajectory.arrival_time()},
                            {"reached", c.trajectory.reached}});
  }
  doc["evader"] = {{"theta", solution.evader.theta},
                   {"residual", number_or_null(solution.evader.residual)},
                   {"deterministic", solution.certificate.deterministic},
                   {"trajectories", trajectories}};
  const auto& cert = solution.certificate;
  doc["certificate"] = {{"support_residual", number_or_null(cert.support_residual)},
                        {"deviation_residual", number_or_null(cert.deviation_residual)},
                        {"optimality_residual", number_or_null(cert.optimality_residual)},
                        {"nash_tol", scenario.solver().nash_tol},
                        {"opt_tol", scenario.solver().opt_tol},
                        {"certified", cert.certified}};
  nlohmann::json ascent = nlohmann::json::array();
  for (const auto& step : solution.ascent) {
    ascent.push_back({{"iteration", step.iteration}, {"G", number_or_null(step.value)}, {"lambda", step.lambda}});
  }
  doc["ascent"] = ascent;
  return doc;
}

void write_outputs(const std::filesystem::path& directory, std::span<const OutputFile> files) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  std::vector<fs::path> staged;
  try {
    for (const auto& f : files) {
      const fs::path target = directory / f.path;
      const fs::path tmp = target.string() + ".partial";
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
      staged.push_back(tmp);
      out.write(f.contents.data(), static_cast<std::streamsize>(f.contents.size()));
      out.close();
      if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : staged) fs::remove(p, ec);
    throw;
  }
  for (std::size_t k = 0; k < files.size(); ++k) fs::rename(staged[k], directory / files[k].path);
}

}  // namespace seg::io
