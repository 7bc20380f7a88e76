#include "agrosim/scenario/metrics.hpp"

#include "agrosim/control/mission.hpp"

#include <algorithm>
#include <cmath>

namespace agrosim::scenario {

namespace {

struct SpeedColumns {
    std::vector<std::pair<std::size_t, std::size_t>> pairs; // setpoint column, true speed column
};

SpeedColumns speed_columns(const cosim::TraceSchema& schema) {
    SpeedColumns c;
    auto add = [&](const char* sp, const char* v) {
        const auto i = schema.column(sp);
        const auto j = schema.column(v);
        if (i && j) c.pairs.emplace_back(*i, *j);
    };
    add(control::ref::sp_left, "v_left");
    add(control::ref::sp_right, "v_right");
    add(control::ref::sp, "v");
    return c;
}

constexpr double time_eps = 1e-9;

} // namespace

std::vector<double> speed_errors(const cosim::TraceSchema& schema, const cosim::TraceRecord& rec) {
    std::vector<double> e;
    for (const auto& [sp, v] : speed_columns(schema).pairs) e.push_back(rec.at(sp) - rec.at(v));
    return e;
}

double rms_speed_error(const cosim::Trace& trace, double start, std::optional<double> end) {
    const SpeedColumns cols = speed_columns(trace.schema);
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : trace.records) {
        if (r.t < start - time_eps) continue;
        if (end && r.t >= *end - time_eps) continue;
        for (const auto& [sp, v] : cols.pairs) {
            const double e = r.at(sp) - r.at(v);
            sum += e * e;
            ++n;
        }
    }
    return n == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(n));
}

std::optional<double> cross_track_rms(const cosim::Trace& trace, const planner::CoveragePlan& plan, double margin) {
    const auto pc = trace.schema.column(control::ref::progress);
    const auto xc = trace.schema.column("x");
    const auto yc = trace.schema.column("y");
    if (!pc || !xc || !yc || plan.swaths.empty()) return std::nullopt;

    const auto& wp = plan.waypoints;
    std::vector<double> arc(wp.size(), 0.0);
    for (std::size_t i = 1; i < wp.size(); ++i) arc[i] = arc[i - 1] + planner::distance(wp[i - 1], wp[i]);
    const std::size_t offset = wp.size() - 2 * plan.swaths.size();

    struct Band {
        double lo, hi;
        planner::Point2 a, b;
    };
    std::vector<Band> bands;
    for (std::size_t k = 0; k < plan.swaths.size(); ++k) {
        const std::size_t i = offset + 2 * k;
        bands.push_back({arc[i] + margin, arc[i + 1] - margin, plan.swaths[k].start, plan.swaths[k].end});
    }

    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : trace.records) {
        const double p = r.at(*pc);
        for (const auto& b : bands) {
            if (p < b.lo || p > b.hi) continue;
            const planner::Point2 d = b.b - b.a;
            const double e = planner::cross(d, planner::Point2{r.at(*xc), r.at(*yc)} - b.a) / planner::norm(d);
            sum += e * e;
            ++n;
            break;
        }
    }
    if (n == 0) return std::nullopt;
    return std::sqrt(sum / static_cast<double>(n));
}

RunSummary summarize(const cosim::Trace& trace, double de_period, const ScenarioConfig& cfg,
                     const std::optional<planner::FieldPolygon>& field,
                     const std::optional<planner::CoveragePlan>& plan, std::span<const planner::Point2> path_tail,
                     bool mission_complete) {
    RunSummary s;
    s.records = trace.size();
    s.sim_time = static_cast<double>(trace.size()) * de_period;
    s.mission_complete = mission_complete;

    const SpeedColumns cols = speed_columns(trace.schema);
    const double warm = warmup_fraction * s.sim_time;
    s.rms_speed_error = rms_speed_error(trace, warm);

    double max_sp = 0.0;
    for (const auto& r : trace.records) {
        for (const auto& [sp, v] : cols.pairs) {
            const double e = std::abs(r.at(sp) - r.at(v));
            if (r.t >= warm - time_eps) s.max_abs_speed_error = std::max(s.max_abs_speed_error, e);
            max_sp = std::max(max_sp, std::abs(r.at(sp)));
        }
    }

    // settled from the first sample after the last excursion outside the band
    const double band = settling_band * max_sp;
    std::optional<std::size_t> last_out;
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const auto& r = trace.records[i];
        for (const auto& [sp, v] : cols.pairs) {
            if (std::abs(r.at(sp) - r.at(v)) > band) {
                last_out = i;
                break;
            }
        }
    }
    if (!last_out) {
        s.settling_time = 0.0;
    } else if (*last_out + 1 < trace.records.size()) {
        s.settling_time = trace.records[*last_out + 1].t;
    } else {
        s.settling_time = s.sim_time;
        s.settled = false;
    }

    if (field && cfg.mission.is_coverage()) {
        const auto xc = trace.schema.column("x");
        const auto yc = trace.schema.column("y");
        std::vector<planner::Point2> path;
        if (xc && yc) {
            for (const auto& r : trace.records) path.push_back({r.at(*xc), r.at(*yc)});
        }
        path.insert(path.end(), path_tail.begin(), path_tail.end());
        planner::CoverageGrid grid(*field, cfg.mission.coverage->width);
        grid.mark_path(path);
        s.coverage = grid.ratio();
        if (plan) s.cross_track_rms = cross_track_rms(trace, *plan, cfg.controller.pursuit.lookahead);
    }
    return s;
}

nlohmann::json to_json(const RunSummary& s) {
    nlohmann::json j;
    j["rms_speed_error"] = s.rms_speed_error;
    j["max_abs_speed_error"] = s.max_abs_speed_error;
    j["settling_time"] = s.settling_time;
    j["settled"] = s.settled;
    j["coverage"] = s.coverage ? nlohmann::json(*s.coverage) : nlohmann::json(nullptr);
    j["cross_track_rms"] = s.cross_track_rms ? nlohmann::json(*s.cross_track_rms) : nlohmann::json(nullptr);
    j["sim_time"] = s.sim_time;
    j["records"] = s.records;
    j["mission_complete"] = s.mission_complete;
    return j;
}

} // namespace agrosim::scenario
