#include "agrosim/scenario/build.hpp"

#include "agrosim/control/mission.hpp"
#include "agrosim/error.hpp"
#include "agrosim/plant/vehicle_plant.hpp"

#include <algorithm>
#include <cmath>

namespace agrosim::scenario {

namespace {

std::unique_ptr<plant::VehiclePlant> make_plant(const ScenarioConfig& cfg, const plant::VehicleState& start) {
    if (cfg.vehicle.kind == plant::VehicleKind::DiffDrive) {
        return std::make_unique<plant::VehiclePlant>(cfg.vehicle.diff, cfg.encoder, start);
    }
    return std::make_unique<plant::VehiclePlant>(cfg.vehicle.kind, cfg.vehicle.steered, cfg.encoder, start);
}

double geometry_of(const ScenarioConfig& cfg) {
    return cfg.vehicle.kind == plant::VehicleKind::DiffDrive ? cfg.vehicle.diff.track_width
                                                            : cfg.vehicle.steered.wheelbase;
}

std::unique_ptr<cosim::DiscreteModel> make_controller(const ScenarioConfig& cfg,
                                                      const std::optional<planner::CoveragePlan>& plan) {
    const control::EncoderPhase phase{cfg.encoder.ticks_per_meter, cfg.encoder.dist_wavelength};
    if (plan) {
        return std::make_unique<control::RouteController>(cfg.vehicle.kind, cfg.controller.speed,
                                                          cfg.controller.pursuit, planner::Route(plan->waypoints),
                                                          geometry_of(cfg), phase, cfg.sync.de_period);
    }
    return std::make_unique<control::SpeedProfileController>(cfg.vehicle.kind, cfg.controller.speed,
                                                             control::SpeedProfile(cfg.mission.speed_profile), phase,
                                                             cfg.sync.de_period);
}

} // namespace

cosim::CoSimContract make_contract(const ScenarioConfig& cfg) {
    const bool diff = cfg.vehicle.kind == plant::VehicleKind::DiffDrive;
    const bool route = cfg.mission.is_coverage();
    namespace port = plant::port;
    namespace ref = control::ref;

    cosim::CoSimContract c;
    if (route) c.monitored = {port::pose_x, port::pose_y, port::pose_theta};
    if (diff) {
        c.monitored.insert(c.monitored.end(),
                           {port::enc_speed_left, port::enc_speed_right, port::enc_ticks_left, port::enc_ticks_right});
        c.controlled = {port::u_left, port::u_right};
        c.references = {ref::sp_left, ref::sp_right};
        c.design_params = {{"track_width", cfg.vehicle.diff.track_width}};
    } else {
        c.monitored.insert(c.monitored.end(), {port::enc_speed, port::enc_ticks});
        c.controlled = {port::u_speed, port::u_steer};
        c.references = {ref::sp};
        c.design_params = {{"wheelbase", cfg.vehicle.steered.wheelbase}};
    }
    if (route) {
        c.references.push_back(ref::progress);
        c.design_params.emplace_back("implement_width", cfg.mission.coverage->width);
    }
    c.design_params.emplace_back("ticks_per_meter", cfg.encoder.ticks_per_meter);
    c.design_params.emplace_back("dist_wavelength", cfg.encoder.dist_wavelength);
    return c;
}

plant::VehicleState start_pose(const planner::CoveragePlan& plan) {
    plant::VehicleState s;
    if (plan.waypoints.empty()) return s;
    s.x = plan.waypoints.front().x;
    s.y = plan.waypoints.front().y;
    const auto next = std::find_if(plan.waypoints.begin() + 1, plan.waypoints.end(), [&](const planner::Point2& p) {
        return planner::distance(p, plan.waypoints.front()) > 1e-12;
    });
    if (next != plan.waypoints.end()) s.theta = std::atan2(next->y - s.y, next->x - s.x);
    return s;
}

BuiltScenario build_scenario(const ScenarioConfig& cfg, std::optional<planner::CoveragePlan> plan,
                             std::optional<plant::VehicleState> start) {
    BuiltScenario b;
    if (cfg.mission.is_coverage()) {
        const auto& m = *cfg.mission.coverage;
        b.field.emplace(m.polygon);
        b.plan = plan ? std::move(plan) : std::optional(planner::plan_coverage(*b.field, m.width, m.direction));
    }
    const plant::VehicleState s0 = start ? *start : (b.plan ? start_pose(*b.plan) : plant::VehicleState{});
    b.engine = std::make_unique<cosim::CoSimEngine>(make_plant(cfg, s0), make_controller(cfg, b.plan),
                                                    make_contract(cfg), cfg.sync);
    return b;
}

} // namespace agrosim::scenario
