#include "agrosim/plant/vehicle_plant.hpp"

#include "agrosim/error.hpp"

namespace agrosim::plant {

const char* to_string(VehicleKind kind) {
    switch (kind) {
    case VehicleKind::DiffDrive: return "diff_drive";
    case VehicleKind::FrontSteer: return "front_steer";
    case VehicleKind::RearSteer: return "rear_steer";
    }
    return "?";
}

VehicleKind vehicle_kind_from_string(const std::string& name) {
    if (name == "diff_drive") return VehicleKind::DiffDrive;
    if (name == "front_steer") return VehicleKind::FrontSteer;
    if (name == "rear_steer") return VehicleKind::RearSteer;
    throw ValidationError("vehicle.type", "unknown vehicle '" + name + "'");
}

VehiclePlant::VehiclePlant(DiffDriveParams params, EncoderConfig encoder, VehicleState start)
    : kind_(VehicleKind::DiffDrive), model_(DiffDriveModel{params}), state_(start), enc_left_(encoder),
      enc_right_(encoder) {
    params.validate();
    encoder.validate();
    // encoders count from the start position
    enc_left_.reset(state_.odo_left);
    enc_right_.reset(state_.odo_right);
}

VehiclePlant::VehiclePlant(VehicleKind steered_kind, SteeredParams params, EncoderConfig encoder, VehicleState start)
    : kind_(steered_kind), state_(start), enc_left_(encoder), enc_right_(encoder) {
    if (steered_kind == VehicleKind::DiffDrive) throw ValidationError("vehicle.type", "not a steered vehicle");
    params.steered_axle = steered_kind == VehicleKind::FrontSteer ? SteeredAxle::Front : SteeredAxle::Rear;
    params.validate();
    encoder.validate();
    model_ = SteeredModel{params};
    enc_left_.reset(state_.odo);
}

cosim::PortSet VehiclePlant::ports() const {
    cosim::PortSet p;
    p.produces = {port::pose_x, port::pose_y, port::pose_theta};
    if (kind_ == VehicleKind::DiffDrive) {
        p.produces.insert(p.produces.end(),
                          {port::enc_speed_left, port::enc_speed_right, port::enc_ticks_left, port::enc_ticks_right});
        p.consumes = {port::u_left, port::u_right};
    } else {
        p.produces.insert(p.produces.end(), {port::enc_speed, port::enc_ticks});
        p.consumes = {port::u_speed, port::u_steer};
    }
    return p;
}

std::vector<std::string> VehiclePlant::truth_names() const {
    if (kind_ == VehicleKind::DiffDrive) return {"x", "y", "theta", "v_left", "v_right", "s"};
    return {"x", "y", "theta", "v", "delta", "s"};
}

void VehiclePlant::sample(double window, std::span<double> out) {
    out[0] = state_.x;
    out[1] = state_.y;
    out[2] = state_.theta;
    if (kind_ == VehicleKind::DiffDrive) {
        const EncoderSample l = enc_left_.sample(state_.odo_left, window);
        const EncoderSample r = enc_right_.sample(state_.odo_right, window);
        out[3] = l.v_measured;
        out[4] = r.v_measured;
        out[5] = static_cast<double>(enc_left_.total_ticks());
        out[6] = static_cast<double>(enc_right_.total_ticks());
    } else {
        const EncoderSample e = enc_left_.sample(state_.odo, window);
        out[3] = e.v_measured;
        out[4] = static_cast<double>(enc_left_.total_ticks());
    }
}

void VehiclePlant::advance(std::span<const double> in, double h) {
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            const typename M::Command cmd{in[0], in[1]};
            state_ = rk4_step(m, state_, cmd, h);
        },
        model_);
}

void VehiclePlant::truth(std::span<double> v) const {
    v[0] = state_.x;
    v[1] = state_.y;
    v[2] = state_.theta;
    if (kind_ == VehicleKind::DiffDrive) {
        v[3] = state_.v_left;
        v[4] = state_.v_right;
    } else {
        v[3] = state_.v;
        v[4] = state_.delta;
    }
    v[5] = state_.s;
}

} // namespace agrosim::plant
