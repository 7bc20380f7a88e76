#include "agrosim/cosim/engine.hpp"

#include "agrosim/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace agrosim::cosim {

namespace {

std::vector<std::size_t> index_map(const std::vector<std::string>& wanted, const std::vector<std::string>& from) {
    std::vector<std::size_t> map;
    map.reserve(wanted.size());
    for (const auto& n : wanted) {
        const auto it = std::find(from.begin(), from.end(), n);
        // validate_contract guarantees presence
        map.push_back(static_cast<std::size_t>(it - from.begin()));
    }
    return map;
}

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

CoSimEngine::CoSimEngine(std::unique_ptr<ContinuousModel> plant, std::unique_ptr<DiscreteModel> controller,
                         CoSimContract contract, SyncConfig sync)
    : plant_(std::move(plant)), controller_(std::move(controller)), sync_(sync) {
    if (!plant_ || !controller_) throw std::invalid_argument("engine needs a plant and a controller");
    sync_.validate();

    const PortSet pp = plant_->ports();
    const PortSet cp = controller_->ports();
    contract_ = validate_contract(pp, cp, contract);

    schema_.truth = plant_->truth_names();
    schema_.monitored = contract_.monitored;
    schema_.controlled = contract_.controlled;
    schema_.references = contract_.references;

    substeps_ = sync_.substeps();
    total_rounds_ = sync_.rounds();

    monitored_from_plant_ = index_map(contract_.monitored, pp.produces);
    controller_in_from_monitored_ = index_map(cp.consumes, contract_.monitored);
    controlled_from_controller_ = index_map(contract_.controlled, cp.produces);
    references_from_controller_ = index_map(contract_.references, cp.produces);
    plant_in_from_controlled_ = index_map(pp.consumes, contract_.controlled);

    plant_out_.assign(pp.produces.size(), 0.0);
    plant_in_.assign(pp.consumes.size(), 0.0);
    controller_in_.assign(cp.consumes.size(), 0.0);
    controller_out_.assign(cp.produces.size(), 0.0);
    held_.assign(contract_.controlled.size(), 0.0);

    controller_->initial_outputs(controller_out_);
    for (std::size_t i = 0; i < held_.size(); ++i) held_[i] = controller_out_[controlled_from_controller_[i]];
    for (std::size_t i = 0; i < plant_in_.size(); ++i) plant_in_[i] = held_[plant_in_from_controlled_[i]];
}

double CoSimEngine::clock() const {
    return static_cast<double>(ticks_) * sync_.ct_step;
}

bool CoSimEngine::horizon_reached() const {
    return rounds_done_ >= total_rounds_;
}

bool CoSimEngine::done() const {
    return horizon_reached() || controller_->mission_complete();
}

void CoSimEngine::set_duration(double duration) {
    SyncConfig next = sync_;
    next.duration = duration;
    next.validate();
    sync_ = next;
    total_rounds_ = sync_.rounds();
}

TraceRecord CoSimEngine::step() {
    if (horizon_reached()) throw std::logic_error("co-simulation horizon reached");

    const double t = clock();
    TraceRecord rec;
    rec.t = t;

    rec.truth.resize(schema_.truth.size());
    plant_->truth(rec.truth);

    plant_->sample(sync_.de_period, plant_out_);
    rec.monitored.resize(contract_.monitored.size());
    for (std::size_t i = 0; i < rec.monitored.size(); ++i) rec.monitored[i] = plant_out_[monitored_from_plant_[i]];
    if (!all_finite(rec.monitored) || !all_finite(rec.truth)) throw NonFiniteState(t, "plant");

    for (std::size_t i = 0; i < controller_in_.size(); ++i) {
        controller_in_[i] = rec.monitored[controller_in_from_monitored_[i]];
    }
    controller_->step(t, controller_in_, sync_.de_period, controller_out_);

    for (std::size_t i = 0; i < held_.size(); ++i) held_[i] = controller_out_[controlled_from_controller_[i]];
    if (!all_finite(held_)) throw NonFiniteState(t, "controller command");
    for (std::size_t i = 0; i < plant_in_.size(); ++i) plant_in_[i] = held_[plant_in_from_controlled_[i]];

    rec.controlled = held_;
    rec.references.resize(contract_.references.size());
    for (std::size_t i = 0; i < rec.references.size(); ++i) {
        rec.references[i] = controller_out_[references_from_controller_[i]];
    }

    for (long long k = 0; k < substeps_; ++k) {
        const double t_sub = static_cast<double>(ticks_ + k + 1) * sync_.ct_step;
        try {
            plant_->advance(plant_in_, sync_.ct_step);
        } catch (const NonFiniteState&) {
            throw NonFiniteState(t_sub, "plant");
        }
        if (!plant_->finite()) throw NonFiniteState(t_sub, "plant");
    }
    ticks_ += substeps_;
    ++rounds_done_;
    return rec;
}

void CoSimEngine::run(const std::function<void(const TraceRecord&)>& sink) {
    while (!done()) sink(step());
}

Trace CoSimEngine::run() {
    Trace trace;
    trace.schema = schema_;
    trace.records.reserve(static_cast<std::size_t>(std::max(0LL, total_rounds_ - rounds_done_)));
    run([&trace](const TraceRecord& r) { trace.records.push_back(r); });
    return trace;
}

} // namespace agrosim::cosim
