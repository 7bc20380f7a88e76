#include "agrosim/scenario/config.hpp"

#include "agrosim/error.hpp"
#include "agrosim/planner/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace agrosim::scenario {

using nlohmann::json;

namespace {

/// Reads the members of one JSON object, remembering which keys were used so
/// that leftovers can be reported as unknown.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ValidationError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json* find(const std::string& key) {
        used_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out) {
        if (const json* v = find(key)) {
            if (!v->is_number()) throw ValidationError(field(key), "expected a number");
            out = v->get<double>();
            if (!std::isfinite(out)) throw ValidationError(field(key), "must be finite");
        }
    }

    void count(const std::string& key, std::size_t& out) {
        if (const json* v = find(key)) {
            if (!v->is_number_integer() || v->get<long long>() < 0) {
                throw ValidationError(field(key), "expected a non-negative integer");
            }
            out = v->get<std::size_t>();
        }
    }

    void integer(const std::string& key, std::int64_t& out) {
        if (const json* v = find(key)) {
            if (!v->is_number_integer()) throw ValidationError(field(key), "expected an integer");
            out = v->get<std::int64_t>();
        }
    }

    void string(const std::string& key, std::string& out) {
        if (const json* v = find(key)) {
            if (!v->is_string()) throw ValidationError(field(key), "expected a string");
            out = v->get<std::string>();
        }
    }

    void finish() const {
        for (const auto& [k, _] : j_.items()) {
            if (!used_.count(k)) throw ValidationError(field(k), "unknown key '" + k + "'");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

VehicleConfig read_vehicle(const json& j) {
    VehicleConfig v;
    if (j.is_string()) {
        v.kind = plant::vehicle_kind_from_string(j.get<std::string>());
        return v;
    }
    ObjectReader r(j, "vehicle");
    std::string type = "diff_drive";
    r.string("type", type);
    v.kind = plant::vehicle_kind_from_string(type);
    if (v.kind == plant::VehicleKind::DiffDrive) {
        r.number("track_width", v.diff.track_width);
        r.number("actuator_tau", v.diff.actuator_tau);
        r.number("v_max", v.diff.v_max);
    } else {
        r.number("wheelbase", v.steered.wheelbase);
        r.number("steer_limit", v.steered.steer_limit);
        r.number("steer_rate_limit", v.steered.steer_rate_limit);
        r.number("steer_tau", v.steered.steer_tau);
        r.number("actuator_tau", v.steered.actuator_tau);
        r.number("v_max", v.steered.v_max);
    }
    v.steered.steered_axle =
        v.kind == plant::VehicleKind::RearSteer ? plant::SteeredAxle::Rear : plant::SteeredAxle::Front;
    r.finish();
    return v;
}

ControllerConfig read_controller(const json* j, double v_max) {
    ControllerConfig c;
    c.speed.pi.u_min = -v_max;
    c.speed.pi.u_max = v_max;
    if (!j) return c;
    if (j->is_string()) {
        c.speed.variant = control::speed_variant_from_string(j->get<std::string>());
        return c;
    }
    ObjectReader r(*j, "controller");
    std::string variant = control::to_string(c.speed.variant);
    r.string("variant", variant);
    c.speed.variant = control::speed_variant_from_string(variant);
    r.number("kp", c.speed.pi.kp);
    r.number("ki", c.speed.pi.ki);
    r.number("u_min", c.speed.pi.u_min);
    r.number("u_max", c.speed.pi.u_max);
    r.count("avg_window", c.speed.avg_window);
    r.number("butter_cutoff", c.speed.butter_cutoff);
    r.count("lffc_knots", c.speed.lffc_knots);
    r.number("lffc_rate", c.speed.lffc_rate);
    r.number("lffc_leak", c.speed.lffc_leak);
    r.number("lffc_min_speed", c.speed.lffc_min_speed);
    r.number("lookahead", c.pursuit.lookahead);
    r.number("cruise_speed", c.pursuit.cruise_speed);
    r.number("goal_tolerance", c.pursuit.goal_tolerance);
    r.finish();
    return c;
}

MissionConfig read_mission(const json& j) {
    MissionConfig m;
    ObjectReader r(j, "mission");
    const json* profile = r.find("speed_profile");
    const json* coverage = r.find("coverage");
    r.finish();
    if (profile && coverage) throw ValidationError("mission", "give either speed_profile or coverage, not both");
    if (profile) {
        if (!profile->is_array() || profile->empty()) {
            throw ValidationError("mission.speed_profile", "expected a non-empty array of [t, v] pairs");
        }
        m.speed_profile.clear();
        for (const auto& e : *profile) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                throw ValidationError("mission.speed_profile", "expected [t, v] pairs");
            }
            m.speed_profile.push_back({e[0].get<double>(), e[1].get<double>()});
        }
    }
    if (coverage) {
        CoverageMission cm;
        ObjectReader c(*coverage, "mission.coverage");
        const json* poly = c.find("polygon");
        if (!poly) throw ValidationError("mission.coverage.polygon", "required");
        cm.polygon = points_from_json(*poly, "mission.coverage.polygon");
        c.number("width", cm.width);
        c.number("direction", cm.direction);
        c.finish();
        m.coverage = std::move(cm);
    }
    return m;
}

} // namespace

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
    }
}

std::vector<planner::Point2> points_from_json(const json& j, const std::string& field) {
    if (!j.is_array()) throw ValidationError(field, "expected an array of [x, y] pairs");
    std::vector<planner::Point2> pts;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
            throw ValidationError(field, "expected [x, y] pairs");
        }
        pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return pts;
}

json points_to_json(const std::vector<planner::Point2>& pts) {
    json a = json::array();
    for (const auto& p : pts) a.push_back({p.x, p.y});
    return a;
}

void ScenarioConfig::validate() const {
    if (vehicle.kind == plant::VehicleKind::DiffDrive) {
        vehicle.diff.validate();
    } else {
        vehicle.steered.validate();
    }
    encoder.validate();
    sync.validate();
    controller.speed.validate(1.0 / sync.de_period);
    controller.pursuit.validate();
    if (mission.is_coverage()) {
        const auto& c = *mission.coverage;
        if (!(c.width > 0.0)) throw ValidationError("mission.coverage.width", "must be positive");
        try {
            planner::FieldPolygon poly(c.polygon);
        } catch (const DegeneratePolygon& e) {
            throw ValidationError("mission.coverage.polygon", e.what());
        }
    } else {
        control::SpeedProfile check(mission.speed_profile);
    }
}

ScenarioConfig scenario_from_json(const json& j) {
    ScenarioConfig cfg;
    ObjectReader r(j, "");
    r.string("name", cfg.name);
    r.integer("seed", cfg.seed);
    if (const json* v = r.find("vehicle")) cfg.vehicle = read_vehicle(*v);
    cfg.controller = read_controller(r.find("controller"), cfg.vehicle.v_max());
    if (const json* e = r.find("encoder")) {
        ObjectReader er(*e, "encoder");
        er.number("ticks_per_meter", cfg.encoder.ticks_per_meter);
        er.number("dist_amplitude", cfg.encoder.dist_amplitude);
        er.number("dist_wavelength", cfg.encoder.dist_wavelength);
        er.number("dist_phase", cfg.encoder.dist_phase);
        er.finish();
    }
    if (const json* s = r.find("sync")) {
        ObjectReader sr(*s, "sync");
        sr.number("de_period", cfg.sync.de_period);
        sr.number("ct_step", cfg.sync.ct_step);
        sr.number("duration", cfg.sync.duration);
        sr.finish();
    }
    if (const json* m = r.find("mission")) cfg.mission = read_mission(*m);
    r.finish();
    cfg.validate();
    return cfg;
}

ScenarioConfig parse_scenario(std::string_view text) {
    return scenario_from_json(parse_json(text));
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("path", "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

json to_json(const ScenarioConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["seed"] = cfg.seed;

    json v;
    v["type"] = plant::to_string(cfg.vehicle.kind);
    if (cfg.vehicle.kind == plant::VehicleKind::DiffDrive) {
        v["track_width"] = cfg.vehicle.diff.track_width;
        v["actuator_tau"] = cfg.vehicle.diff.actuator_tau;
        v["v_max"] = cfg.vehicle.diff.v_max;
    } else {
        const auto& s = cfg.vehicle.steered;
        v["wheelbase"] = s.wheelbase;
        v["steer_limit"] = s.steer_limit;
        v["steer_rate_limit"] = s.steer_rate_limit;
        v["steer_tau"] = s.steer_tau;
        v["actuator_tau"] = s.actuator_tau;
        v["v_max"] = s.v_max;
    }
    j["vehicle"] = v;

    const auto& sc = cfg.controller.speed;
    const auto& pp = cfg.controller.pursuit;
    j["controller"] = {
        {"variant", control::to_string(sc.variant)},
        {"kp", sc.pi.kp},
        {"ki", sc.pi.ki},
        {"u_min", sc.pi.u_min},
        {"u_max", sc.pi.u_max},
        {"avg_window", sc.avg_window},
        {"butter_cutoff", sc.butter_cutoff},
        {"lffc_knots", sc.lffc_knots},
        {"lffc_rate", sc.lffc_rate},
        {"lffc_leak", sc.lffc_leak},
        {"lffc_min_speed", sc.lffc_min_speed},
        {"lookahead", pp.lookahead},
        {"cruise_speed", pp.cruise_speed},
        {"goal_tolerance", pp.goal_tolerance},
    };
    j["encoder"] = {
        {"ticks_per_meter", cfg.encoder.ticks_per_meter},
        {"dist_amplitude", cfg.encoder.dist_amplitude},
        {"dist_wavelength", cfg.encoder.dist_wavelength},
        {"dist_phase", cfg.encoder.dist_phase},
    };
    j["sync"] = {
        {"de_period", cfg.sync.de_period},
        {"ct_step", cfg.sync.ct_step},
        {"duration", cfg.sync.duration},
    };
    json m;
    if (cfg.mission.is_coverage()) {
        const auto& c = *cfg.mission.coverage;
        m["coverage"] = {{"polygon", points_to_json(c.polygon)}, {"width", c.width}, {"direction", c.direction}};
    } else {
        json p = json::array();
        for (const auto& s : cfg.mission.speed_profile) p.push_back({s.t, s.v});
        m["speed_profile"] = p;
    }
    j["mission"] = m;
    return j;
}

} // namespace agrosim::scenario
