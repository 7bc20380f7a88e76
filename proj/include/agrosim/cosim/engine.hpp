#pragma once

#include "agrosim/cosim/contract.hpp"
#include "agrosim/cosim/trace.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace agrosim::cosim {

/// Continuous-time side of a co-model.
///
/// Port values are passed as spans aligned with `ports().produces` and
/// `ports().consumes` respectively.
class ContinuousModel {
public:
    virtual ~ContinuousModel() = default;

    virtual PortSet ports() const = 0;
    virtual std::vector<std::string> truth_names() const = 0;

    /// Sensor outputs at the current instant. `window` is the time since the previous sample.
    virtual void sample(double window, std::span<double> outputs) = 0;
    /// Integrate one CT step of length `h` with inputs held constant.
    virtual void advance(std::span<const double> inputs, double h) = 0;
    virtual void truth(std::span<double> values) const = 0;
    virtual bool finite() const = 0;
};

/// Discrete-event side of a co-model: a sampled controller.
class DiscreteModel {
public:
    virtual ~DiscreteModel() = default;

    virtual PortSet ports() const = 0;
    /// Outputs held before the first DE round.
    virtual void initial_outputs(std::span<double> outputs) const = 0;
    /// One controller invocation at time `t` with sampling interval `dt`.
    virtual void step(double t, std::span<const double> inputs, double dt, std::span<double> outputs) = 0;
    /// True once the controller has nothing left to do (e.g. route finished).
    virtual bool mission_complete() const { return false; }
};

/// Fixed-step DE/CT co-simulation engine.
///
/// Each round samples the plant, runs the controller once, then integrates the
/// plant for de_period/ct_step substeps with the new commands held constant.
/// Time is kept as an integer count of CT ticks.
class CoSimEngine {
public:
    /// Validates the contract and sync config and binds the ports by name.
    CoSimEngine(std::unique_ptr<ContinuousModel> plant, std::unique_ptr<DiscreteModel> controller,
                CoSimContract contract, SyncConfig sync);

    CoSimEngine(const CoSimEngine&) = delete;
    CoSimEngine& operator=(const CoSimEngine&) = delete;
    CoSimEngine(CoSimEngine&&) = default;
    CoSimEngine& operator=(CoSimEngine&&) = default;

    /// One synchronization round; returns the record sampled at the start of it.
    /// Throws std::logic_error when no round is left, NonFiniteState on blow-up.
    TraceRecord step();

    /// Steps until the horizon is reached or the controller reports completion.
    Trace run();
    /// Same, streaming each record to `sink` instead of collecting them.
    void run(const std::function<void(const TraceRecord&)>& sink);

    /// No round left: horizon reached or mission complete.
    bool done() const;
    bool horizon_reached() const;
    double clock() const;
    long long rounds_done() const { return rounds_done_; }

    const TraceSchema& schema() const { return schema_; }
    const CoSimContract& contract() const { return contract_; }
    const SyncConfig& sync() const { return sync_; }
    /// Zero-order-hold buffer, aligned with `contract().controlled`.
    std::span<const double> held_commands() const { return held_; }

    /// Extends the horizon (used by interactive sessions that outlive the configured duration).
    void set_duration(double duration);

    ContinuousModel& plant() { return *plant_; }
    const ContinuousModel& plant() const { return *plant_; }
    DiscreteModel& controller() { return *controller_; }
    const DiscreteModel& controller() const { return *controller_; }

private:
    std::unique_ptr<ContinuousModel> plant_;
    std::unique_ptr<DiscreteModel> controller_;
    CoSimContract contract_;
    SyncConfig sync_;
    TraceSchema schema_;

    long long substeps_ = 0;
    long long total_rounds_ = 0;
    long long rounds_done_ = 0;
    long long ticks_ = 0;

    // index maps from contract order into model port order
    std::vector<std::size_t> monitored_from_plant_;
    std::vector<std::size_t> controller_in_from_monitored_;
    std::vector<std::size_t> controlled_from_controller_;
    std::vector<std::size_t> references_from_controller_;
    std::vector<std::size_t> plant_in_from_controlled_;

    std::vector<double> plant_out_;
    std::vector<double> plant_in_;
    std::vector<double> controller_in_;
    std::vector<double> controller_out_;
    std::vector<double> held_;
};

} // namespace agrosim::cosim
