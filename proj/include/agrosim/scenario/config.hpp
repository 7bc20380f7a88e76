#pragma once

#include "agrosim/control/mission.hpp"
#include "agrosim/control/pure_pursuit.hpp"
#include "agrosim/control/speed_controller.hpp"
#include "agrosim/cosim/contract.hpp"
#include "agrosim/planner/geometry.hpp"
#include "agrosim/plant/encoder.hpp"
#include "agrosim/plant/vehicle.hpp"
#include "agrosim/plant/vehicle_plant.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace agrosim::scenario {

struct VehicleConfig {
    plant::VehicleKind kind = plant::VehicleKind::DiffDrive;
    plant::DiffDriveParams diff;     ///< used when kind is DiffDrive
    plant::SteeredParams steered;    ///< used otherwise
    double v_max() const { return kind == plant::VehicleKind::DiffDrive ? diff.v_max : steered.v_max; }
};

struct ControllerConfig {
    control::SpeedControllerConfig speed;
    control::PurePursuitConfig pursuit;
};

struct CoverageMission {
    std::vector<planner::Point2> polygon;
    double width = 2.0;
    double direction = 0.0;
};

/// Exactly one of the two missions is active.
struct MissionConfig {
    std::vector<control::SpeedStep> speed_profile{{0.0, 1.0}};
    std::optional<CoverageMission> coverage;

    bool is_coverage() const { return coverage.has_value(); }
};

struct ScenarioConfig {
    std::string name = "scenario";
    VehicleConfig vehicle;
    ControllerConfig controller;
    plant::EncoderConfig encoder;
    cosim::SyncConfig sync;
    MissionConfig mission;
    std::int64_t seed = 0; ///< reserved, all models are deterministic

    /// Throws ValidationError naming the offending field.
    void validate() const;
};

/// Parses JSON text. Unknown keys are rejected, omitted keys take their defaults.
/// Throws ParseError (with a 1-based line) or ValidationError.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig scenario_from_json(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Fully expanded form: every parameter written out explicitly.
nlohmann::json to_json(const ScenarioConfig& cfg);

/// Parses `text` as JSON, mapping syntax errors to ParseError with a line number.
nlohmann::json parse_json(std::string_view text);

/// Polygon vertex array [[x, y], ...]. Throws ValidationError(field, ...).
std::vector<planner::Point2> points_from_json(const nlohmann::json& j, const std::string& field);
nlohmann::json points_to_json(const std::vector<planner::Point2>& pts);

} // namespace agrosim::scenario
