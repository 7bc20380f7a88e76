#pragma once

#include "agrosim/cosim/trace.hpp"
#include "agrosim/planner/coverage.hpp"
#include "agrosim/scenario/config.hpp"

#include <json.hpp>

#include <optional>
#include <span>

namespace agrosim::scenario {

struct RunSummary {
    double rms_speed_error = 0.0;     ///< m/s, after warm-up
    double max_abs_speed_error = 0.0; ///< m/s, after warm-up
    double settling_time = 0.0;       ///< s, end time when never settled
    bool settled = true;
    std::optional<double> coverage;
    std::optional<double> cross_track_rms; ///< m
    double sim_time = 0.0;                 ///< s simulated
    std::size_t records = 0;
    bool mission_complete = false;
};

inline constexpr double warmup_fraction = 0.2;
inline constexpr double settling_band = 0.05;

/// Per-track speed error (setpoint minus true track speed) of one record, in
/// the order sp_left/v_left, sp_right/v_right, or sp/v for steered vehicles.
std::vector<double> speed_errors(const cosim::TraceSchema& schema, const cosim::TraceRecord& rec);

/// RMS of speed errors over records with t >= start, pooled over tracks.
double rms_speed_error(const cosim::Trace& trace, double start, std::optional<double> end = std::nullopt);

/// Cross-track RMS to the swath centerlines over records whose route progress
/// lies on a swath, excluding `margin` meters after entering and before leaving it.
std::optional<double> cross_track_rms(const cosim::Trace& trace, const planner::CoveragePlan& plan, double margin);

/// Metrics of a finished run. `path_tail` is appended to the trace positions
/// for coverage (the pose after the final round).
RunSummary summarize(const cosim::Trace& trace, double de_period, const ScenarioConfig& cfg,
                     const std::optional<planner::FieldPolygon>& field,
                     const std::optional<planner::CoveragePlan>& plan, std::span<const planner::Point2> path_tail = {},
                     bool mission_complete = false);

nlohmann::json to_json(const RunSummary& s);

} // namespace agrosim::scenario
