#pragma once

#include "agrosim/cosim/engine.hpp"
#include "agrosim/planner/coverage.hpp"
#include "agrosim/plant/vehicle.hpp"
#include "agrosim/scenario/config.hpp"

#include <memory>
#include <optional>

namespace agrosim::scenario {

struct BuiltScenario {
    std::unique_ptr<cosim::CoSimEngine> engine;
    std::optional<planner::FieldPolygon> field; ///< coverage missions only
    std::optional<planner::CoveragePlan> plan;
};

/// Contract between the vehicle plant and the mission controller of `cfg`.
cosim::CoSimContract make_contract(const ScenarioConfig& cfg);

/// Vehicle start pose for a coverage plan: first waypoint, heading along the first segment.
plant::VehicleState start_pose(const planner::CoveragePlan& plan);

/// Assembles plant, controller and engine for a validated config.
///
/// Coverage missions are planned from the config unless `plan` is given;
/// `start` overrides the vehicle start state.
BuiltScenario build_scenario(const ScenarioConfig& cfg, std::optional<planner::CoveragePlan> plan = std::nullopt,
                             std::optional<plant::VehicleState> start = std::nullopt);

} // namespace agrosim::scenario
