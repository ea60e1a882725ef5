#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "seg/game.hpp"
#include "seg/pareto.hpp"

namespace seg::io {

// Shortest round-trip decimal form.
std::string format_number(double v);

// Binary PBM (P4), 1 = visible. The first image row is the top edge y = 1,
// so the raster displays with the domain origin at the lower left.
std::string pbm_image(const Grid2D& grid, std::span<const std::uint8_t> mask);

// Binary 16-bit PGM (P5), big-endian, same orientation as pbm_image. Values
// are scaled linearly so that max_value maps to 65535 and clipped to [0, max].
std::string pgm16_image(const Grid2D& grid, std::span<const double> values, double max_value);

// Flat dump of selected value-function slices:
//   "SEGU" | u32 version=1 | u32 n | u32 slice_count | f64 dt | u32 slice index[slice_count]
//   | f32 values[slice_count][(n+1)^2], row-major (j outer), little-endian.
std::string value_dump(const ValueFunction& u, std::span<const int> slices);

// Header `t,x,y`, one row per timestep.
std::string trajectory_csv(const Trajectory& traj);
// Header `iteration,G,lambda_1,...,lambda_r`.
std::string ascent_csv(std::span<const AscentStep> trace);
// Header `lambda_i,J_1,...,J_r,value`; lambda_i is the weight of patrol i.
std::string pareto_csv(std::span<const ParetoPoint> points, int i);

nlohmann::json best_response_json(const Scenario& scenario, const ObserverPolicy& lambda, const BestResponse& br);
nlohmann::json solution_json(const Scenario& scenario, const GameSolution& solution);

// Writes all files or none: contents are staged next to their targets and
// renamed once every write succeeded.
struct OutputFile {
  std::filesystem::path path;
  std::string contents;
};
void write_outputs(const std::filesystem::path& directory, std::span<const OutputFile> files);

}  // namespace seg::io
