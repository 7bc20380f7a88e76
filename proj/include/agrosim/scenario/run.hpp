#pragma once

#include "agrosim/control/speed_controller.hpp"
#include "agrosim/scenario/config.hpp"
#include "agrosim/scenario/metrics.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace agrosim::scenario {

/// Runs `cfg` and writes trace.csv, summary.json and scenario.resolved.json into `out_dir`.
/// On a simulation failure the partial trace ends with an error row and the error is rethrown.
RunSummary run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

struct ComparisonRow {
    control::SpeedVariant variant = control::SpeedVariant::Raw;
    std::optional<RunSummary> summary;
    std::string error; ///< set when the variant failed
};

/// Runs the base scenario once per variant (concurrently) into out_dir/<variant>/
/// and writes out_dir/comparison.csv ordered by rms_speed_error, failures last.
/// Throws ValidationError when the base mission is not a speed profile.
std::vector<ComparisonRow> compare_controllers(const ScenarioConfig& base,
                                               std::span<const control::SpeedVariant> variants,
                                               const std::filesystem::path& out_dir);

} // namespace agrosim::scenario
