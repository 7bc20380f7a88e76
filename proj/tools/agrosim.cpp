// agrosim command line: run, compare, plan, serve.

#include "agrosim/error.hpp"
#include "agrosim/planner/coverage.hpp"
#include "agrosim/scenario/config.hpp"
#include "agrosim/scenario/run.hpp"
#include "agrosim/scenario/trace_io.hpp"
#include "agrosim/service/server.hpp"
#include "agrosim/service/session_core.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace agrosim;

constexpr int exit_validation = 2;
constexpr int exit_simulation = 3;

std::vector<control::SpeedVariant> parse_variants(const std::string& list) {
    std::vector<control::SpeedVariant> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(control::speed_variant_from_string(item));
    }
    if (out.empty()) throw ValidationError("--variants", "empty list");
    return out;
}

std::vector<planner::Point2> load_polygon(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("polygon", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const auto j = scenario::parse_json(ss.str());
    if (j.is_object()) {
        if (!j.contains("vertices")) throw ValidationError("vertices", "required");
        return scenario::points_from_json(j["vertices"], "vertices");
    }
    return scenario::points_from_json(j, "vertices");
}

int cmd_run(const std::string& path, std::string out) {
    const auto cfg = scenario::load_scenario(path);
    if (out.empty()) out = "out/" + cfg.name;
    const auto summary = scenario::run_scenario(cfg, out);
    std::cout << scenario::to_json(summary).dump(2) << "\n";
    return 0;
}

int cmd_compare(const std::string& path, const std::string& variants, std::string out) {
    const auto cfg = scenario::load_scenario(path);
    if (out.empty()) out = "out/" + cfg.name + "-compare";
    const auto rows = scenario::compare_controllers(cfg, parse_variants(variants), out);
    std::cout << "variant  rms_speed_error  max_abs_speed_error\n";
    bool failed = false;
    for (const auto& r : rows) {
        std::cout << control::to_string(r.variant) << "  ";
        if (r.summary) {
            std::cout << scenario::format_number(r.summary->rms_speed_error) << "  "
                      << scenario::format_number(r.summary->max_abs_speed_error) << "\n";
        } else {
            failed = true;
            std::cout << "failed: " << r.error << "\n";
        }
    }
    std::cout << "written to " << out << "/comparison.csv\n";
    return failed ? exit_simulation : 0;
}

int cmd_plan(const std::string& path, double width, double direction) {
    const planner::FieldPolygon poly(load_polygon(path));
    const auto plan = planner::plan_coverage(poly, width, direction);
    std::cout << service::plan_to_json(plan).dump(2) << "\n";
    return 0;
}

int cmd_serve(const std::string& address, int port) {
    service::SessionManager sessions;
    const unsigned short p = port >= 0 ? static_cast<unsigned short>(port) : service::port_from_env();
    service::HttpServer server(sessions, address, p);

    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);

    server.start();
    std::cerr << "agrosim serving on " << address << ":" << server.port() << "\n";
    int sig = 0;
    sigwait(&set, &sig);
    server.stop();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"agrosim: DE/CT co-simulation workbench for agricultural vehicles"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir, variants = "raw,avg,butter,lffc", polygon_path, address = "0.0.0.0";
    double width = 0.0, direction = 0.0;
    int port = -1;

    auto* run = app.add_subcommand("run", "run one scenario");
    run->add_option("scenario", scenario_path, "scenario JSON")->required();
    run->add_option("--out", out_dir, "output directory (default out/<name>)");

    auto* compare = app.add_subcommand("compare", "run a scenario once per speed-controller variant");
    compare->add_option("scenario", scenario_path, "scenario JSON")->required();
    compare->add_option("--variants", variants, "comma-separated list of raw, avg, butter, lffc");
    compare->add_option("--out", out_dir, "output directory (default out/<name>-compare)");

    auto* plan = app.add_subcommand("plan", "plan boustrophedon coverage of a polygon");
    plan->add_option("polygon", polygon_path, "polygon JSON: [[x, y], ...] or {\"vertices\": ...}")->required();
    plan->add_option("--width", width, "implement width, m")->required();
    plan->add_option("--direction", direction, "driving direction, rad");

    auto* serve = app.add_subcommand("serve", "start the HTTP/WebSocket session service");
    serve->add_option("--port", port, "listen port (default AGROSIM_PORT or 8080)");
    serve->add_option("--address", address, "listen address");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_validation;
    }

    try {
        if (*run) return cmd_run(scenario_path, out_dir);
        if (*compare) return cmd_compare(scenario_path, variants, out_dir);
        if (*plan) return cmd_plan(polygon_path, width, direction);
        if (*serve) return cmd_serve(address, port);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const DegeneratePolygon& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const SimulationError& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return exit_simulation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
