#include "agrosim/control/mission.hpp"

#include "agrosim/error.hpp"

#include <algorithm>
#include <cmath>

namespace agrosim::control {

using plant::VehicleKind;
namespace port = plant::port;

SpeedProfile::SpeedProfile(std::vector<SpeedStep> steps) : steps_(std::move(steps)) {
    if (steps_.empty()) throw ValidationError("mission.speed_profile", "empty");
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        if (!std::isfinite(steps_[i].t) || !std::isfinite(steps_[i].v)) {
            throw ValidationError("mission.speed_profile", "non-finite entry");
        }
        if (i > 0 && !(steps_[i].t > steps_[i - 1].t)) throw ValidationError("mission.speed_profile", "non-monotonic");
    }
}

double SpeedProfile::at(double t) const {
    const auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                                     [](double tt, const SpeedStep& s) { return tt < s.t; });
    return it == steps_.begin() ? 0.0 : std::prev(it)->v;
}

double EncoderPhase::operator()(double ticks) const {
    const double cycles = ticks / ticks_per_meter / wavelength;
    return cycles - std::floor(cycles);
}

SpeedLoops::SpeedLoops(VehicleKind kind, const SpeedControllerConfig& cfg, EncoderPhase phase, double dt)
    : differential_(kind == VehicleKind::DiffDrive), phase_(phase) {
    if (!(phase.ticks_per_meter > 0.0) || !(phase.wavelength > 0.0)) {
        throw ValidationError("encoder", "phase needs ticks_per_meter > 0 and dist_wavelength > 0");
    }
    const std::size_t n = differential_ ? 2 : 1;
    for (std::size_t i = 0; i < n; ++i) loops_.emplace_back(cfg, dt);
}

std::vector<double> SpeedLoops::step(std::span<const double> setpoints, std::span<const double> speeds,
                                     std::span<const double> ticks) {
    std::vector<double> u(loops_.size());
    for (std::size_t i = 0; i < loops_.size(); ++i) u[i] = loops_[i].step(setpoints[i], speeds[i], phase_(ticks[i]));
    return u;
}

namespace {

std::vector<std::string> encoder_inputs(VehicleKind kind) {
    if (kind == VehicleKind::DiffDrive) {
        return {port::enc_speed_left, port::enc_speed_right, port::enc_ticks_left, port::enc_ticks_right};
    }
    return {port::enc_speed, port::enc_ticks};
}

} // namespace

SpeedProfileController::SpeedProfileController(VehicleKind kind, const SpeedControllerConfig& cfg,
                                               SpeedProfile profile, EncoderPhase phase, double dt)
    : kind_(kind), profile_(std::move(profile)), loops_(kind, cfg, phase, dt) {}

cosim::PortSet SpeedProfileController::ports() const {
    cosim::PortSet p;
    p.consumes = encoder_inputs(kind_);
    if (loops_.differential()) {
        p.produces = {port::u_left, port::u_right, ref::sp_left, ref::sp_right};
    } else {
        p.produces = {port::u_speed, port::u_steer, ref::sp};
    }
    p.params = {"ticks_per_meter", "dist_wavelength"};
    return p;
}

void SpeedProfileController::initial_outputs(std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
}

void SpeedProfileController::step(double t, std::span<const double> in, double, std::span<double> out) {
    const double sp = profile_.at(t);
    if (loops_.differential()) {
        const double sps[2] = {sp, sp};
        const auto u = loops_.step(sps, in.subspan(0, 2), in.subspan(2, 2));
        out[0] = u[0];
        out[1] = u[1];
        out[2] = sp;
        out[3] = sp;
    } else {
        const auto u = loops_.step(std::span(&sp, 1), in.subspan(0, 1), in.subspan(1, 1));
        out[0] = u[0];
        out[1] = 0.0;
        out[2] = sp;
    }
}

RouteController::RouteController(VehicleKind kind, const SpeedControllerConfig& cfg, PurePursuitConfig pursuit,
                                 planner::Route route, double geometry, EncoderPhase phase, double dt)
    : kind_(kind), pursuit_cfg_(pursuit), pursuit_(std::move(route), pursuit), geometry_(geometry),
      loops_(kind, cfg, phase, dt) {
    if (!(geometry > 0.0)) throw ValidationError("vehicle", "track width / wheelbase must be > 0");
}

cosim::PortSet RouteController::ports() const {
    cosim::PortSet p;
    p.consumes = {port::pose_x, port::pose_y, port::pose_theta};
    const auto enc = encoder_inputs(kind_);
    p.consumes.insert(p.consumes.end(), enc.begin(), enc.end());
    if (loops_.differential()) {
        p.produces = {port::u_left, port::u_right, ref::sp_left, ref::sp_right, ref::progress};
        p.params = {"track_width", "ticks_per_meter", "dist_wavelength"};
    } else {
        p.produces = {port::u_speed, port::u_steer, ref::sp, ref::progress};
        p.params = {"wheelbase", "ticks_per_meter", "dist_wavelength"};
    }
    return p;
}

void RouteController::initial_outputs(std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
}

void RouteController::set_route(planner::Route route) {
    pursuit_ = PurePursuit(std::move(route), pursuit_cfg_);
}

void RouteController::step(double, std::span<const double> in, double, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    if (pursuit_.finished()) {
        out[out.size() - 1] = pursuit_.progress();
        return;
    }
    const Point2 pos{in[0], in[1]};
    const PursuitOutput po = pursuit_.step(pos, in[2]);
    const auto enc = in.subspan(3);
    if (loops_.differential()) {
        double sps[2] = {0.0, 0.0};
        if (!po.finished) {
            const TrackSpeeds ts = track_speeds(po.curvature, po.speed, geometry_);
            sps[0] = ts.left;
            sps[1] = ts.right;
            const auto u = loops_.step(sps, enc.subspan(0, 2), enc.subspan(2, 2));
            out[0] = u[0];
            out[1] = u[1];
        }
        out[2] = sps[0];
        out[3] = sps[1];
        out[4] = po.progress;
    } else {
        double sp = 0.0;
        if (!po.finished) {
            sp = po.speed;
            const auto u = loops_.step(std::span(&sp, 1), enc.subspan(0, 1), enc.subspan(1, 1));
            const double steer = std::atan(po.curvature * geometry_);
            out[0] = u[0];
            out[1] = kind_ == VehicleKind::RearSteer ? -steer : steer;
        }
        out[2] = sp;
        out[3] = po.progress;
    }
}

} // namespace agrosim::control
