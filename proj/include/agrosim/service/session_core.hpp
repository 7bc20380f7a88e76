#pragma once

#include "agrosim/cosim/engine.hpp"
#include "agrosim/planner/coverage.hpp"
#include "agrosim/scenario/config.hpp"

#include <json.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace agrosim::service {

enum class SessionState { Idle, Planned, Running, Paused, Finished, Failed };

enum class SessionOp {
    Submit,
    Start,
    Pause,
    Reset,
    Finish, ///< internal: mission complete or horizon reached
    Fail,   ///< internal: simulation error
};

const char* to_string(SessionState s);
const char* to_string(SessionOp op);

/// The declared transition table. Returns nullopt for an illegal operation.
std::optional<SessionState> transition(SessionState from, SessionOp op);

/// Live telemetry of one session.
struct StateUpdate {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
    double speed_setpoint = 0.0;
    double speed_measured = 0.0;
    double route_progress = 0.0;
    double route_length = 0.0;
    double coverage = 0.0;
    SessionState state = SessionState::Idle;
};

nlohmann::json to_json(const StateUpdate& u);
nlohmann::json plan_to_json(const planner::CoveragePlan& plan);

/// Scenario used for sessions created without one.
scenario::ScenarioConfig default_session_config();

/// Single-threaded heart of a session: the state machine plus the engine it drives.
///
/// Every mutation happens through the public operations, and the simulation
/// advances only in advance(), one DE round at a time.
class SessionCore {
public:
    explicit SessionCore(scenario::ScenarioConfig base);

    SessionState state() const { return state_; }

    /// Plans coverage and moves to Planned. From Paused the current pose is kept,
    /// the route is re-linked from it and prior coverage is carried over.
    /// Throws WrongState, DegeneratePolygon or ValidationError.
    const planner::CoveragePlan& submit_polygon(std::vector<planner::Point2> vertices, double width,
                                                double direction);
    SessionState start();
    SessionState pause();
    SessionState reset();

    /// Runs one DE round when Running. Returns an update every `update_stride()`
    /// rounds and on reaching Finished or Failed.
    std::optional<StateUpdate> advance();

    StateUpdate snapshot() const;
    const std::optional<planner::CoveragePlan>& plan() const { return plan_; }
    const scenario::ScenarioConfig& config() const { return base_; }
    /// Scenario equivalent to the submitted mission (for batch reproduction).
    std::optional<scenario::ScenarioConfig> mission_config() const;
    double time() const;
    int update_stride() const { return stride_; }
    const std::string& failure() const { return failure_; }
    const cosim::CoSimEngine* engine() const { return engine_.get(); }

    /// Receives every trace record produced while stepping.
    void set_record_sink(std::function<void(const cosim::TraceRecord&)> sink) { sink_ = std::move(sink); }

    /// Update interval in simulated seconds.
    static constexpr double update_interval = 0.1;

private:
    void require(SessionOp op);
    void mark_to_current_pose();
    planner::Point2 current_position() const;

    scenario::ScenarioConfig base_;
    SessionState state_ = SessionState::Idle;
    int stride_;

    std::optional<scenario::CoverageMission> mission_;
    std::optional<planner::FieldPolygon> field_;
    std::optional<planner::CoveragePlan> plan_;
    std::unique_ptr<cosim::CoSimEngine> engine_;
    std::unique_ptr<planner::CoverageGrid> grid_;
    std::vector<planner::Point2> trail_;
    std::optional<cosim::TraceRecord> last_record_;
    long long rounds_since_update_ = 0;
    std::string failure_;
    std::function<void(const cosim::TraceRecord&)> sink_;
};

} // namespace agrosim::service
