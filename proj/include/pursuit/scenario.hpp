#pragma once

// Scenario documents (JSON): world, players, strategy/policy tags, timing,
// monitors, an optional defense target and live-session options.

#include <optional>
#include <string>

#include "json.hpp"

#include "pursuit/engine.hpp"
#include "pursuit/theorem_lab.hpp"

namespace pursuit {

struct SessionOptions {
  double tick_rate = 50.0;       // ticks per wall-clock second; 0 = stepped on request only
  int boundary_refresh_ticks = 0; // recompute the current region's boundary every N ticks (0 = initial only)
};

struct Scenario {
  std::string name;
  std::string description;
  SimConfig config;
  std::optional<TargetRegion> target;
  int boundary_samples = 720;
  SessionOptions session;
};

World world_from_json(const nlohmann::json& j);
nlohmann::json world_to_json(const World& w);

TargetShape target_shape_from_json(const nlohmann::json& j);
nlohmann::json target_shape_to_json(const TargetShape& s);

/// Throws ParseError naming the offending field.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);

Scenario parse_scenario(const std::string& text);
/// Throws ParseError for unreadable files.
Scenario load_scenario(const std::string& path);

}  // namespace pursuit
