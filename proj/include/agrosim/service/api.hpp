#pragma once

#include "agrosim/service/session.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace agrosim::service {

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

/// Routes one HTTP JSON request (without the WebSocket stream endpoint).
///
///   POST /sessions                      {scenario?, time_scale?}   -> 201 {id, state}
///   GET  /sessions/{id}                                           -> snapshot
///   POST /sessions/{id}/polygon         {vertices, width, direction} -> plan
///   POST /sessions/{id}/start|pause|reset                         -> {state}
///
/// Errors map to 400 (validation), 404 (unknown session or route),
/// 405 (method), 409 (wrong state), each with an {error, detail} body.
ApiResponse handle_request(SessionManager& sessions, std::string_view method, std::string_view target,
                           std::string_view body);

/// Session id of a `/sessions/{id}/stream` target, if it is one.
std::optional<std::string> stream_target(std::string_view target);

} // namespace agrosim::service
