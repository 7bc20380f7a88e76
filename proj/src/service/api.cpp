#include "agrosim/service/api.hpp"

#include "agrosim/error.hpp"

#include <vector>

namespace agrosim::service {

using nlohmann::json;

namespace {

std::vector<std::string_view> split_path(std::string_view target) {
    if (const auto q = target.find('?'); q != std::string_view::npos) target = target.substr(0, q);
    std::vector<std::string_view> parts;
    std::size_t i = 0;
    while (i < target.size()) {
        if (target[i] == '/') {
            ++i;
            continue;
        }
        const auto j = target.find('/', i);
        const auto end = j == std::string_view::npos ? target.size() : j;
        parts.push_back(target.substr(i, end - i));
        i = end;
    }
    return parts;
}

ApiResponse error(int status, const std::string& kind, const std::string& detail) {
    return {status, {{"error", kind}, {"detail", detail}}};
}

json parse_body(std::string_view body) {
    if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) return nullptr;
    return scenario::parse_json(body);
}

double number_field(const json& j, const char* key, std::optional<double> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw ValidationError(key, "required");
    }
    if (!j[key].is_number()) throw ValidationError(key, "expected a number");
    return j[key].get<double>();
}

ApiResponse submit(Session& s, const json& body) {
    if (!body.is_object()) throw ValidationError("body", "expected {vertices, width, direction}");
    for (const auto& [k, _] : body.items()) {
        if (k != "vertices" && k != "width" && k != "direction") throw ValidationError(k, "unknown key '" + k + "'");
    }
    if (!body.contains("vertices")) throw ValidationError("vertices", "required");
    auto vertices = scenario::points_from_json(body["vertices"], "vertices");
    const double width = number_field(body, "width");
    const double direction = number_field(body, "direction", 0.0);
    return {200, s.submit_polygon(std::move(vertices), width, direction)};
}

ApiResponse route(SessionManager& sessions, std::string_view method, const std::vector<std::string_view>& parts,
                  std::string_view raw_body) {
    if (parts.empty() || parts[0] != "sessions") return error(404, "NotFound", "no such route");
    if (parts.size() == 1) {
        if (method != "POST") return error(405, "MethodNotAllowed", "use POST /sessions");
        const std::string id = sessions.create(parse_body(raw_body));
        return {201, {{"id", id}, {"state", to_string(SessionState::Idle)}}};
    }
    const std::string id(parts[1]);
    if (parts.size() == 2) {
        if (method != "GET") return error(405, "MethodNotAllowed", "use GET /sessions/{id}");
        return {200, sessions.get(id)->snapshot()};
    }
    if (parts.size() != 3) return error(404, "NotFound", "no such route");
    const std::string_view action = parts[2];
    if (action != "polygon" && action != "start" && action != "pause" && action != "reset") {
        return error(404, "NotFound", "no such route");
    }
    if (method != "POST") return error(405, "MethodNotAllowed", "use POST");
    auto session = sessions.get(id);
    if (action == "polygon") return submit(*session, parse_body(raw_body));
    SessionState s{};
    if (action == "start") s = session->start();
    if (action == "pause") s = session->pause();
    if (action == "reset") s = session->reset();
    return {200, {{"state", to_string(s)}}};
}

} // namespace

ApiResponse handle_request(SessionManager& sessions, std::string_view method, std::string_view target,
                           std::string_view body) {
    try {
        return route(sessions, method, split_path(target), body);
    } catch (const UnknownSession& e) {
        return error(404, "UnknownSession", e.what());
    } catch (const WrongState& e) {
        return error(409, "WrongState", e.what());
    } catch (const ParseError& e) {
        return error(400, "ParseError", e.what());
    } catch (const ValidationError& e) {
        return error(400, "ValidationError", e.what());
    } catch (const DegeneratePolygon& e) {
        return error(400, "DegeneratePolygon", e.what());
    } catch (const std::exception& e) {
        return error(500, "InternalError", e.what());
    }
}

std::optional<std::string> stream_target(std::string_view target) {
    const auto parts = split_path(target);
    if (parts.size() == 3 && parts[0] == "sessions" && parts[2] == "stream") return std::string(parts[1]);
    return std::nullopt;
}

} // namespace agrosim::service
