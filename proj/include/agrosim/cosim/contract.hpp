#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace agrosim::cosim {

/// Timing of one co-simulation: DE sampling interval, CT integration step and horizon, all in seconds.
struct SyncConfig {
    double de_period = 0.02;
    double ct_step = 0.001;
    double duration = 10.0;

    /// Throws ValidationError if any invariant is violated.
    void validate() const;

    /// CT substeps per DE period. Requires a validated config.
    long long substeps() const;
    /// Number of DE rounds that fit in `duration`.
    long long rounds() const;
};

using DesignParam = std::pair<std::string, double>;

/// Variable binding between the DE controller and the CT plant.
///
/// `monitored` flows plant -> controller, `controlled` flows controller -> plant.
/// `references` are controller-side signals (setpoints, route progress) that are
/// recorded in the trace but never exchanged with the plant.
struct CoSimContract {
    std::vector<std::string> monitored;
    std::vector<std::string> controlled;
    std::vector<std::string> references;
    std::vector<DesignParam> design_params;

    std::optional<double> param(std::string_view name) const;
};

/// Directional port declaration of one model.
struct PortSet {
    std::vector<std::string> produces;
    std::vector<std::string> consumes;
    /// Design parameters the model relies on.
    std::vector<std::string> params;
};

/// Checks `contract` against the ports of the attached plant and controller.
///
/// Returns the contract unchanged when every monitored name is produced by the
/// plant and consumed by the controller, every controlled name is produced by
/// the controller and consumed by the plant, every model input and parameter
/// resolves to a contract entry, and no name is declared twice. Produced ports
/// that the contract does not mention are simply not exchanged.
///
/// Throws ContractError (DirectionConflict, DuplicateName, UnboundVariable) or
/// ValidationError for non-finite design parameters.
CoSimContract validate_contract(const PortSet& plant_ports, const PortSet& controller_ports,
                                const CoSimContract& contract);

} // namespace agrosim::cosim
