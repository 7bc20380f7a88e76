#include "agrosim/cosim/contract.hpp"

#include "agrosim/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace agrosim::cosim {

namespace {

constexpr double kRatioTolerance = 1e-12;

bool contains(const std::vector<std::string>& names, const std::string& n) {
    return std::find(names.begin(), names.end(), n) != names.end();
}

} // namespace

void SyncConfig::validate() const {
    if (!(de_period > 0.0) || !std::isfinite(de_period)) {
        throw ValidationError("sync.de_period", "must be positive");
    }
    if (!(ct_step > 0.0) || !std::isfinite(ct_step)) {
        throw ValidationError("sync.ct_step", "must be positive");
    }
    if (!(duration >= 0.0) || !std::isfinite(duration)) {
        throw ValidationError("sync.duration", "must be non-negative");
    }
    const double ratio = de_period / ct_step;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(ratio - n) > kRatioTolerance * ratio) {
        throw ValidationError("sync.de_period", "must be an integer multiple of ct_step");
    }
}

long long SyncConfig::substeps() const {
    return std::llround(de_period / ct_step);
}

long long SyncConfig::rounds() const {
    // clock + de_period <= duration + 1e-12, counted in whole rounds
    return static_cast<long long>(std::floor((duration + 1e-12) / de_period + 1e-9));
}

std::optional<double> CoSimContract::param(std::string_view name) const {
    for (const auto& [k, v] : design_params) {
        if (k == name) {
            return v;
        }
    }
    return std::nullopt;
}

CoSimContract validate_contract(const PortSet& plant_ports, const PortSet& controller_ports,
                                const CoSimContract& contract) {
    for (const auto& name : contract.monitored) {
        if (contains(contract.controlled, name)) {
            throw ContractError(ContractError::Kind::DirectionConflict, name);
        }
    }

    std::set<std::string> seen;
    auto claim = [&seen](const std::string& name) {
        if (!seen.insert(name).second) {
            throw ContractError(ContractError::Kind::DuplicateName, name);
        }
    };
    for (const auto& n : contract.monitored) claim(n);
    for (const auto& n : contract.controlled) claim(n);
    for (const auto& n : contract.references) claim(n);
    for (const auto& [n, v] : contract.design_params) {
        claim(n);
        if (!std::isfinite(v)) {
            throw ValidationError("design_params." + n, "must be finite");
        }
    }

    auto unbound = [](const std::string& n) { return ContractError(ContractError::Kind::UnboundVariable, n); };

    for (const auto& n : contract.monitored) {
        if (!contains(plant_ports.produces, n) || !contains(controller_ports.consumes, n)) throw unbound(n);
    }
    for (const auto& n : contract.controlled) {
        if (!contains(controller_ports.produces, n) || !contains(plant_ports.consumes, n)) throw unbound(n);
    }
    for (const auto& n : contract.references) {
        if (!contains(controller_ports.produces, n) || contains(plant_ports.consumes, n)) throw unbound(n);
    }
    // every model input must be driven by exactly one contract entry
    for (const auto& n : plant_ports.consumes) {
        if (!contains(contract.controlled, n)) throw unbound(n);
    }
    for (const auto& n : controller_ports.consumes) {
        if (!contains(contract.monitored, n)) throw unbound(n);
    }
    for (const auto* ports : {&plant_ports, &controller_ports}) {
        for (const auto& n : ports->params) {
            if (!contract.param(n)) throw unbound(n);
        }
    }
    return contract;
}

} // namespace agrosim::cosim
