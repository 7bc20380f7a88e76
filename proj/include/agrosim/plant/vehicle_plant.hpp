#pragma once

#include "agrosim/cosim/engine.hpp"
#include "agrosim/plant/encoder.hpp"
#include "agrosim/plant/vehicle.hpp"

#include <string>
#include <variant>
#include <vector>

namespace agrosim::plant {

enum class VehicleKind { DiffDrive, FrontSteer, RearSteer };

const char* to_string(VehicleKind kind);
/// Throws ValidationError for unknown names.
VehicleKind vehicle_kind_from_string(const std::string& name);

/// Port names used by the vehicle templates.
namespace port {
inline constexpr const char* pose_x = "pose_x";
inline constexpr const char* pose_y = "pose_y";
inline constexpr const char* pose_theta = "pose_theta";
inline constexpr const char* enc_speed_left = "enc_speed_left";
inline constexpr const char* enc_speed_right = "enc_speed_right";
inline constexpr const char* enc_ticks_left = "enc_ticks_left";
inline constexpr const char* enc_ticks_right = "enc_ticks_right";
inline constexpr const char* enc_speed = "enc_speed";
inline constexpr const char* enc_ticks = "enc_ticks";
inline constexpr const char* u_left = "u_left";
inline constexpr const char* u_right = "u_right";
inline constexpr const char* u_speed = "u_speed";
inline constexpr const char* u_steer = "u_steer";
} // namespace port

/// CT vehicle plant: kinematic template + actuator lag + encoders, integrated with RK4.
class VehiclePlant final : public cosim::ContinuousModel {
public:
    VehiclePlant(DiffDriveParams params, EncoderConfig encoder, VehicleState start = {});
    VehiclePlant(VehicleKind steered_kind, SteeredParams params, EncoderConfig encoder, VehicleState start = {});

    cosim::PortSet ports() const override;
    std::vector<std::string> truth_names() const override;
    void sample(double window, std::span<double> outputs) override;
    void advance(std::span<const double> inputs, double h) override;
    void truth(std::span<double> values) const override;
    bool finite() const override { return state_.finite(); }

    VehicleKind kind() const { return kind_; }
    const VehicleState& state() const { return state_; }

private:
    VehicleKind kind_;
    std::variant<DiffDriveModel, SteeredModel> model_;
    VehicleState state_;
    Encoder enc_left_;
    Encoder enc_right_;
};

} // namespace agrosim::plant
