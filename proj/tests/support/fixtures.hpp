#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "seg/scenario.hpp"

namespace seg::test {

inline std::filesystem::path source_dir() { return SEG_SOURCE_DIR; }
inline std::filesystem::path shipped_scenario(const std::string& name) {
  return source_dir() / "scenarios" / (name + ".json");
}

// Open unit square, one slow circular patrol, constant speed 1.
inline ScenarioConfig open_config(int n = 40, double T = 2.0) {
  ScenarioConfig cfg;
  cfg.name = "test";
  cfg.n = n;
  cfg.dt = 1.0 / n;
  cfg.T = T;
  cfg.start = {0.2, 0.5};
  cfg.target = {0.8, 0.5};
  cfg.patrols.push_back(CirclePatrol{{0.5, 0.5}, 0.25, 1.0, 0.0});
  return cfg;
}

inline std::vector<std::string> shipped_names() { return {"example1", "example2", "example3", "example4"}; }

// Shipped scenario re-gridded to n (dt/h preserved).
inline Scenario shipped_at(const std::string& name, int n) {
  ScenarioConfig cfg = read_scenario_config(shipped_scenario(name));
  apply_grid_override(cfg, n);
  return Scenario(std::move(cfg));
}

}  // namespace seg::test
