#include "agrosim/scenario/run.hpp"

#include "agrosim/error.hpp"
#include "agrosim/plant/vehicle_plant.hpp"
#include "agrosim/scenario/build.hpp"
#include "agrosim/scenario/trace_io.hpp"

#include <algorithm>
#include <fstream>
#include <future>

namespace agrosim::scenario {

namespace fs = std::filesystem;

namespace {

void write_json(const fs::path& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    out << j.dump(2) << '\n';
    if (!out) throw Error("cannot write " + path.string());
}

} // namespace

RunSummary run_scenario(const ScenarioConfig& cfg, const fs::path& out_dir) {
    cfg.validate();
    fs::create_directories(out_dir);
    write_json(out_dir / "scenario.resolved.json", to_json(cfg));

    BuiltScenario built = build_scenario(cfg);
    cosim::CoSimEngine& engine = *built.engine;

    std::ofstream csv(out_dir / "trace.csv", std::ios::binary);
    if (!csv) throw Error("cannot write " + (out_dir / "trace.csv").string());
    write_csv_header(csv, engine.schema());

    cosim::Trace trace;
    trace.schema = engine.schema();
    try {
        engine.run([&](const cosim::TraceRecord& r) {
            write_csv_record(csv, r);
            trace.records.push_back(r);
        });
    } catch (const SimulationError& e) {
        write_csv_error(csv, e.time(), e.what());
        csv.flush();
        throw;
    }
    csv.close();

    std::vector<planner::Point2> tail;
    if (const auto* p = dynamic_cast<const plant::VehiclePlant*>(&engine.plant())) {
        tail.push_back({p->state().x, p->state().y});
    }
    const RunSummary summary = summarize(trace, cfg.sync.de_period, cfg, built.field, built.plan, tail,
                                         engine.controller().mission_complete());
    write_json(out_dir / "summary.json", to_json(summary));
    return summary;
}

std::vector<ComparisonRow> compare_controllers(const ScenarioConfig& base,
                                               std::span<const control::SpeedVariant> variants,
                                               const fs::path& out_dir) {
    if (base.mission.is_coverage()) throw ValidationError("mission", "compare needs a speed_profile mission");
    fs::create_directories(out_dir);

    std::vector<std::future<RunSummary>> jobs;
    for (const auto v : variants) {
        ScenarioConfig cfg = base;
        cfg.controller.speed.variant = v;
        jobs.push_back(std::async(std::launch::async, [cfg, dir = out_dir / control::to_string(v)] {
            return run_scenario(cfg, dir);
        }));
    }

    std::vector<ComparisonRow> rows;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        ComparisonRow row;
        row.variant = variants[i];
        try {
            row.summary = jobs[i].get();
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
        if (a.summary.has_value() != b.summary.has_value()) return a.summary.has_value();
        return a.summary && a.summary->rms_speed_error < b.summary->rms_speed_error;
    });

    std::ofstream csv(out_dir / "comparison.csv", std::ios::binary);
    csv << "variant,status,rms_speed_error,max_abs_speed_error,settling_time,error\n";
    for (const auto& r : rows) {
        csv << control::to_string(r.variant) << ',';
        if (r.summary) {
            csv << "ok," << format_number(r.summary->rms_speed_error) << ','
                << format_number(r.summary->max_abs_speed_error) << ',' << format_number(r.summary->settling_time)
                << ",\n";
        } else {
            std::string msg = r.error;
            std::replace(msg.begin(), msg.end(), '"', '\'');
            csv << "failed,,,,\"" << msg << "\"\n";
        }
    }
    if (!csv) throw Error("cannot write " + (out_dir / "comparison.csv").string());
    return rows;
}

} // namespace agrosim::scenario
