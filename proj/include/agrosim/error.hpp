#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace agrosim {

/// Root of every error the library raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configuration or input value is out of its declared domain.
class ValidationError : public Error {
public:
    ValidationError(std::string field, std::string reason)
        : Error(field + ": " + reason), field_(std::move(field)), reason_(std::move(reason)) {}

    const std::string& field() const noexcept { return field_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string field_;
    std::string reason_;
};

/// Malformed configuration text. `line` is 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("parse error at line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Inconsistency between a co-simulation contract and the models bound to it.
class ContractError : public Error {
public:
    enum class Kind { UnboundVariable, DuplicateName, DirectionConflict };

    ContractError(Kind kind, std::string name)
        : Error(std::string(kind_name(kind)) + "(" + name + ")"), kind_(kind), name_(std::move(name)) {}

    Kind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }

    static const char* kind_name(Kind k) noexcept {
        switch (k) {
        case Kind::UnboundVariable: return "UnboundVariable";
        case Kind::DuplicateName: return "DuplicateName";
        case Kind::DirectionConflict: return "DirectionConflict";
        }
        return "ContractError";
    }

private:
    Kind kind_;
    std::string name_;
};

/// Failure while the co-simulation is advancing. Carries the simulated time of the failing round.
class SimulationError : public Error {
public:
    SimulationError(double t, const std::string& what)
        : Error(what + " (t=" + std::to_string(t) + ")"), t_(t) {}

    double time() const noexcept { return t_; }

private:
    double t_;
};

/// A plant state or actuator command became NaN or infinite.
class NonFiniteState : public SimulationError {
public:
    NonFiniteState(double t, const std::string& where)
        : SimulationError(t, "non-finite state in " + where) {}
};

class InvalidCutoff : public Error {
public:
    using Error::Error;
};

class DegeneratePolygon : public Error {
public:
    using Error::Error;
};

/// Route progress passed the final waypoint; the mission is complete.
class RouteExhausted : public Error {
public:
    RouteExhausted() : Error("route exhausted") {}
};

class WrongState : public Error {
public:
    using Error::Error;
};

class UnknownSession : public Error {
public:
    explicit UnknownSession(const std::string& id) : Error("unknown session " + id) {}
};

} // namespace agrosim
