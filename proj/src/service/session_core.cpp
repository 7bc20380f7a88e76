#include "agrosim/service/session_core.hpp"

#include "agrosim/control/mission.hpp"
#include "agrosim/error.hpp"
#include "agrosim/plant/vehicle_plant.hpp"
#include "agrosim/scenario/build.hpp"

#include <cmath>

namespace agrosim::service {

const char* to_string(SessionState s) {
    switch (s) {
    case SessionState::Idle: return "Idle";
    case SessionState::Planned: return "Planned";
    case SessionState::Running: return "Running";
    case SessionState::Paused: return "Paused";
    case SessionState::Finished: return "Finished";
    case SessionState::Failed: return "Failed";
    }
    return "?";
}

const char* to_string(SessionOp op) {
    switch (op) {
    case SessionOp::Submit: return "submit";
    case SessionOp::Start: return "start";
    case SessionOp::Pause: return "pause";
    case SessionOp::Reset: return "reset";
    case SessionOp::Finish: return "finish";
    case SessionOp::Fail: return "fail";
    }
    return "?";
}

std::optional<SessionState> transition(SessionState from, SessionOp op) {
    using S = SessionState;
    switch (op) {
    case SessionOp::Submit:
        if (from == S::Idle || from == S::Planned || from == S::Paused) return S::Planned;
        break;
    case SessionOp::Start:
        if (from == S::Planned || from == S::Paused) return S::Running;
        break;
    case SessionOp::Pause:
        if (from == S::Running) return S::Paused;
        break;
    case SessionOp::Reset:
        if (from != S::Idle) return S::Idle;
        break;
    case SessionOp::Finish:
        if (from == S::Running) return S::Finished;
        break;
    case SessionOp::Fail:
        if (from == S::Running) return S::Failed;
        break;
    }
    return std::nullopt;
}

nlohmann::json to_json(const StateUpdate& u) {
    return {
        {"t", u.t},
        {"pose", {{"x", u.x}, {"y", u.y}, {"theta", u.theta}}},
        {"speed_setpoint", u.speed_setpoint},
        {"speed_measured", u.speed_measured},
        {"route_progress", u.route_progress},
        {"route_length", u.route_length},
        {"coverage", u.coverage},
        {"session_state", to_string(u.state)},
    };
}

nlohmann::json plan_to_json(const planner::CoveragePlan& plan) {
    nlohmann::json swaths = nlohmann::json::array();
    for (const auto& s : plan.swaths) {
        swaths.push_back({{"start", {s.start.x, s.start.y}}, {"end", {s.end.x, s.end.y}}, {"line", s.line}});
    }
    return {
        {"swaths", swaths},
        {"waypoints", scenario::points_to_json(plan.waypoints)},
        {"implement_width", plan.implement_width},
        {"direction", plan.direction},
        {"route_length", planner::Route(plan.waypoints).length()},
    };
}

scenario::ScenarioConfig default_session_config() {
    scenario::ScenarioConfig cfg;
    cfg.name = "session";
    cfg.controller.speed.variant = control::SpeedVariant::Butterworth;
    cfg.controller.speed.pi.kp = 1.0;
    cfg.controller.speed.pi.ki = 4.0;
    cfg.sync.duration = 3600.0;
    return cfg;
}

SessionCore::SessionCore(scenario::ScenarioConfig base) : base_(std::move(base)) {
    base_.validate();
    stride_ = std::max(1, static_cast<int>(std::lround(update_interval / base_.sync.de_period)));
}

void SessionCore::require(SessionOp op) {
    if (!transition(state_, op)) {
        throw WrongState(std::string("cannot ") + to_string(op) + " a session in state " + to_string(state_));
    }
}

double SessionCore::time() const {
    return engine_ ? engine_->clock() : 0.0;
}

planner::Point2 SessionCore::current_position() const {
    const auto& p = dynamic_cast<const plant::VehiclePlant&>(engine_->plant());
    return {p.state().x, p.state().y};
}

void SessionCore::mark_to_current_pose() {
    const planner::Point2 p = current_position();
    grid_->mark_segment(trail_.empty() ? p : trail_.back(), p);
    trail_.push_back(p);
}

const planner::CoveragePlan& SessionCore::submit_polygon(std::vector<planner::Point2> vertices, double width,
                                                         double direction) {
    require(SessionOp::Submit);
    if (!(width > 0.0) || !std::isfinite(width)) throw ValidationError("width", "must be positive");
    if (!std::isfinite(direction)) throw ValidationError("direction", "must be finite");
    planner::FieldPolygon field(vertices);
    scenario::CoverageMission mission{field.vertices(), width, direction};

    if (state_ == SessionState::Paused && engine_) {
        auto& rc = dynamic_cast<control::RouteController&>(engine_->controller());
        planner::CoveragePlan plan = planner::plan_coverage(field, width, direction, current_position());
        rc.set_route(planner::Route(plan.waypoints));
        grid_ = std::make_unique<planner::CoverageGrid>(field, width);
        grid_->mark_path(trail_);
        plan_ = std::move(plan);
    } else {
        scenario::ScenarioConfig cfg = base_;
        cfg.mission.coverage = mission;
        scenario::BuiltScenario built = scenario::build_scenario(cfg);
        engine_ = std::move(built.engine);
        plan_ = std::move(built.plan);
        grid_ = std::make_unique<planner::CoverageGrid>(field, width);
        trail_.clear();
        last_record_.reset();
        mark_to_current_pose();
    }
    mission_ = std::move(mission);
    field_ = std::move(field);
    state_ = SessionState::Planned;
    return *plan_;
}

SessionState SessionCore::start() {
    require(SessionOp::Start);
    state_ = SessionState::Running;
    return state_;
}

SessionState SessionCore::pause() {
    require(SessionOp::Pause);
    state_ = SessionState::Paused;
    return state_;
}

SessionState SessionCore::reset() {
    require(SessionOp::Reset);
    engine_.reset();
    grid_.reset();
    plan_.reset();
    field_.reset();
    mission_.reset();
    trail_.clear();
    last_record_.reset();
    failure_.clear();
    state_ = SessionState::Idle;
    return state_;
}

std::optional<StateUpdate> SessionCore::advance() {
    if (state_ != SessionState::Running) return std::nullopt;
    try {
        if (engine_->done()) {
            state_ = SessionState::Finished;
            return snapshot();
        }
        cosim::TraceRecord rec = engine_->step();
        if (sink_) sink_(rec);
        last_record_ = std::move(rec);
        mark_to_current_pose();
    } catch (const std::exception& e) {
        failure_ = e.what();
        state_ = SessionState::Failed;
        return snapshot();
    }
    if (engine_->done()) {
        state_ = SessionState::Finished;
        return snapshot();
    }
    if (engine_->rounds_done() % stride_ == 0) return snapshot();
    return std::nullopt;
}

StateUpdate SessionCore::snapshot() const {
    StateUpdate u;
    u.state = state_;
    if (!engine_) return u;
    u.t = engine_->clock();
    const auto& p = dynamic_cast<const plant::VehiclePlant&>(engine_->plant());
    u.x = p.state().x;
    u.y = p.state().y;
    u.theta = p.state().theta;
    if (const auto* rc = dynamic_cast<const control::RouteController*>(&engine_->controller())) {
        u.route_progress = rc->pursuit().progress();
        u.route_length = rc->pursuit().route().length();
    }
    u.coverage = grid_ ? grid_->ratio() : 0.0;
    if (last_record_) {
        const auto& schema = engine_->schema();
        auto mean_of = [&](std::initializer_list<const char*> names) {
            double sum = 0.0;
            int n = 0;
            for (const char* name : names) {
                if (const auto c = schema.column(name)) {
                    sum += last_record_->at(*c);
                    ++n;
                }
            }
            return n ? sum / n : 0.0;
        };
        u.speed_setpoint = mean_of({control::ref::sp_left, control::ref::sp_right, control::ref::sp});
        u.speed_measured = mean_of({plant::port::enc_speed_left, plant::port::enc_speed_right, plant::port::enc_speed});
    }
    return u;
}

std::optional<scenario::ScenarioConfig> SessionCore::mission_config() const {
    if (!mission_) return std::nullopt;
    scenario::ScenarioConfig cfg = base_;
    cfg.mission.coverage = mission_;
    return cfg;
}

} // namespace agrosim::service
