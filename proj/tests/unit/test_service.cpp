#include "agrosim/error.hpp"
#include "agrosim/scenario/run.hpp"
#include "agrosim/scenario/trace_io.hpp"
#include "agrosim/service/session.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

using namespace agrosim;
using namespace agrosim::service;
using namespace std::chrono_literals;
using planner::Point2;

namespace {

const std::vector<Point2> rect{{0, 0}, {20, 0}, {20, 10}, {0, 10}};
const std::vector<Point2> small{{0, 0}, {4, 0}, {4, 2}, {0, 2}};

// The session diagram, written out independently of the implementation.
const std::map<std::pair<SessionState, SessionOp>, SessionState> declared = [] {
    using S = SessionState;
    using O = SessionOp;
    std::map<std::pair<S, O>, S> t;
    for (S s : {S::Idle, S::Planned, S::Paused}) t[{s, O::Submit}] = S::Planned;
    t[{S::Planned, O::Start}] = S::Running;
    t[{S::Paused, O::Start}] = S::Running;
    t[{S::Running, O::Pause}] = S::Paused;
    for (S s : {S::Planned, S::Running, S::Paused, S::Finished, S::Failed}) t[{s, O::Reset}] = S::Idle;
    t[{S::Running, O::Finish}] = S::Finished;
    t[{S::Running, O::Fail}] = S::Failed;
    return t;
}();

const std::vector<SessionState> all_states{SessionState::Idle,   SessionState::Planned,  SessionState::Running,
                                           SessionState::Paused, SessionState::Finished, SessionState::Failed};
const std::vector<SessionOp> all_ops{SessionOp::Submit, SessionOp::Start,  SessionOp::Pause,
                                     SessionOp::Reset,  SessionOp::Finish, SessionOp::Fail};

scenario::ScenarioConfig fast_config() {
    return default_session_config();
}

std::vector<nlohmann::json> drain(UpdateChannel& ch, std::chrono::milliseconds quiet = 300ms) {
    std::vector<nlohmann::json> out;
    while (auto m = ch.pop(quiet)) out.push_back(nlohmann::json::parse(*m));
    return out;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("transition table matches the declared diagram") {
    for (SessionState s : all_states) {
        for (SessionOp op : all_ops) {
            const auto it = declared.find({s, op});
            const auto got = transition(s, op);
            if (it == declared.end()) {
                CHECK_FALSE(got.has_value());
            } else {
                REQUIRE(got.has_value());
                CHECK(*got == it->second);
            }
        }
    }
}

TEST_CASE("random operation sequences stay on declared transitions") {
    std::mt19937_64 rng(99);
    SessionCore core(fast_config());
    std::uniform_int_distribution<int> pick(0, 4);
    std::uniform_int_distribution<int> rounds(1, 400);
    std::size_t ops = 0, rejected = 0;
    std::map<SessionState, int> visited;
    while (ops < 12000) {
        const SessionState before = core.state();
        const int k = pick(rng);
        ++ops;
        if (k == 4) {
            // simulation steps can only finish or fail a running session
            const int n = rounds(rng);
            for (int i = 0; i < n; ++i) core.advance();
            const SessionState after = core.state();
            if (after != before) {
                const bool finish = declared.count({before, SessionOp::Finish}) &&
                                    declared.at({before, SessionOp::Finish}) == after;
                const bool fail = declared.count({before, SessionOp::Fail}) && declared.at({before, SessionOp::Fail}) == after;
                REQUIRE((finish || fail));
            }
            visited[after]++;
            continue;
        }
        const SessionOp op = all_ops[static_cast<std::size_t>(k)];
        const auto expected = declared.find({before, op});
        try {
            switch (op) {
            case SessionOp::Submit: core.submit_polygon(small, 2.0, 0.0); break;
            case SessionOp::Start: core.start(); break;
            case SessionOp::Pause: core.pause(); break;
            case SessionOp::Reset: core.reset(); break;
            default: break;
            }
            REQUIRE(expected != declared.end());
            REQUIRE(core.state() == expected->second);
        } catch (const WrongState&) {
            ++rejected;
            REQUIRE(expected == declared.end());
            REQUIRE(core.state() == before);
        }
        visited[core.state()]++;
    }
    CHECK(ops >= 10000);
    CHECK(rejected > 0);
    for (SessionState s : {SessionState::Idle, SessionState::Planned, SessionState::Running, SessionState::Paused,
                           SessionState::Finished}) {
        CHECK(visited[s] > 0);
    }
}

TEST_CASE("session manager basics") {
    SessionManager mgr;
    const std::string a = mgr.create(nlohmann::json::object());
    const std::string b = mgr.create(nlohmann::json(nullptr));
    CHECK(a != b);
    CHECK(a.size() == 32);
    CHECK(mgr.get(a)->state() == SessionState::Idle);
    CHECK(mgr.size() == 2);
    CHECK_THROWS_AS(mgr.get("nope"), UnknownSession);
    CHECK_THROWS_AS(mgr.create(nlohmann::json{{"scenario", {{"vehicle", "spaceship"}}}}), ValidationError);
    CHECK_THROWS_AS(mgr.create(nlohmann::json{{"speed", 1}}), ValidationError);
    CHECK_THROWS_AS(mgr.create(nlohmann::json{{"time_scale", -1}}), ValidationError);
}

TEST_CASE("submit, start and wrong-state errors") {
    SessionManager mgr;
    auto s = mgr.get(mgr.create(nlohmann::json{{"time_scale", 0}}));
    CHECK_THROWS_AS(s->pause(), WrongState);
    CHECK_THROWS_AS(s->start(), WrongState);
    CHECK_THROWS_AS(s->submit_polygon({{0, 0}, {1, 1}, {2, 2}}, 2.0, 0.0), DegeneratePolygon);
    CHECK(s->state() == SessionState::Idle);
    const nlohmann::json plan = s->submit_polygon(rect, 2.0, 0.0);
    CHECK(plan["swaths"].size() == 5);
    CHECK(plan["route_length"].get<double>() > 100.0);
    CHECK(s->state() == SessionState::Planned);
    const nlohmann::json snap = s->snapshot();
    CHECK(snap["state"] == "Planned");
    CHECK(snap["update"]["pose"]["x"] == 0.0);
    CHECK(snap["update"]["pose"]["y"] == 1.0);
    CHECK(s->start() == SessionState::Running);
    CHECK_THROWS_AS(s->submit_polygon(rect, 2.0, 0.0), WrongState);
    CHECK(s->wait_for(SessionState::Finished, 20s));
    CHECK_THROWS_AS(s->pause(), WrongState);
    CHECK(s->reset() == SessionState::Idle);
    CHECK(s->snapshot()["plan"].is_null());
}

TEST_CASE("mission completion and update stream") {
    SessionManager mgr;
    auto s = mgr.get(mgr.create(nlohmann::json{{"time_scale", 0}}));
    s->submit_polygon(rect, 2.0, 0.0);
    auto a = s->subscribe(100000);
    auto b = s->subscribe(100000);
    s->start();
    REQUIRE(s->wait_for(SessionState::Finished, 20s));
    const auto ua = drain(*a);
    const auto ub = drain(*b);
    REQUIRE(ua.size() > 100);
    CHECK(ua == ub);
    CHECK(ua.front()["session_state"] == "Planned");
    const auto& last = ua.back();
    CHECK(last["session_state"] == "Finished");
    const double length = last["route_length"].get<double>();
    const double lookahead = default_session_config().controller.pursuit.lookahead;
    CHECK(std::abs(last["route_progress"].get<double>() - length) <= lookahead);
    CHECK(last["coverage"].get<double>() >= 0.95);

    double prev_t = -1.0, prev_cov = 0.0;
    std::size_t running = 0;
    for (const auto& u : ua) {
        if (u["session_state"] != "Running") continue;
        ++running;
        CHECK(u["t"].get<double>() > prev_t);
        CHECK(u["coverage"].get<double>() >= prev_cov);
        if (prev_t >= 0.0 && running > 2) {
            CHECK(u["t"].get<double>() - prev_t == doctest::Approx(0.1).epsilon(1e-6));
        }
        prev_t = u["t"].get<double>();
        prev_cov = u["coverage"].get<double>();
    }
}

TEST_CASE("time_scale 0 reproduces the batch trace") {
    SessionManager mgr;
    auto s = mgr.get(mgr.create(nlohmann::json{{"time_scale", 0}}));
    std::ostringstream live;
    s->set_record_sink([&](const cosim::TraceRecord& r) { scenario::write_csv_record(live, r); });
    s->submit_polygon(rect, 2.0, 0.0);
    s->start();
    REQUIRE(s->wait_for(SessionState::Finished, 20s));
    const auto cfg = s->with_core([](SessionCore& c) { return c.mission_config(); });
    REQUIRE(cfg);
    const auto out = std::filesystem::temp_directory_path() / "agrosim-test-service-batch";
    std::filesystem::remove_all(out);
    scenario::run_scenario(*cfg, out);
    const std::string batch = slurp(out / "trace.csv");
    const std::string body = batch.substr(batch.find('\n') + 1);
    CHECK(body.size() > 1000);
    CHECK(live.str() == body);
}

TEST_CASE("pause and resume do not change the outcome") {
    auto run = [](bool interrupt, std::uint64_t seed) {
        SessionManager mgr;
        auto s = mgr.get(mgr.create(nlohmann::json{{"time_scale", 0}}));
        s->submit_polygon({{0, 0}, {40, 0}, {40, 30}, {0, 30}}, 2.0, 0.0);
        s->start();
        int cycles = 0;
        if (interrupt) {
            std::mt19937_64 rng(seed);
            std::uniform_int_distribution<int> wait_us(0, 3000);
            for (; cycles < 100; ++cycles) {
                std::this_thread::sleep_for(std::chrono::microseconds(wait_us(rng)));
                try {
                    s->pause();
                } catch (const WrongState&) {
                    break;
                }
                std::this_thread::sleep_for(std::chrono::microseconds(wait_us(rng) / 10));
                s->start();
            }
        }
        REQUIRE(s->wait_for(SessionState::Finished, 60s));
        const auto pose = s->with_core([](SessionCore& c) {
            const auto u = c.snapshot();
            return std::array<double, 4>{u.x, u.y, u.theta, u.t};
        });
        return std::pair{pose, cycles};
    };
    const auto [reference, none] = run(false, 0);
    const auto [paused, cycles] = run(true, 4242);
    CHECK(cycles == 100);
    CHECK(paused == reference);
}

TEST_CASE("subscribe to a paused session") {
    SessionManager mgr;
    auto s = mgr.get(mgr.create(nlohmann::json{{"time_scale", 1}}));
    s->submit_polygon(rect, 2.0, 0.0);
    s->start();
    std::this_thread::sleep_for(100ms);
    s->pause();
    auto ch = s->subscribe();
    const auto first = ch->pop(1s);
    REQUIRE(first);
    CHECK(nlohmann::json::parse(*first)["session_state"] == "Paused");
    CHECK_FALSE(ch->pop(400ms));
    s->start();
    const auto next = ch->pop(1s);
    REQUIRE(next);
    CHECK(nlohmann::json::parse(*next)["session_state"] == "Running");
}

TEST_CASE("start then pause lands within one update interval") {
    SessionManager mgr;
    auto s = mgr.get(mgr.create(nlohmann::json{{"time_scale", 1}}));
    s->submit_polygon(rect, 2.0, 0.0);
    auto ch = s->subscribe();
    s->start();
    s->pause();
    const auto updates = drain(*ch, 200ms);
    REQUIRE(updates.size() >= 3);
    double t_start = -1.0;
    for (const auto& u : updates) {
        if (u["session_state"] == "Running" && t_start < 0.0) t_start = u["t"].get<double>();
    }
    CHECK(t_start == 0.0);
    CHECK(updates.back()["session_state"] == "Paused");
    CHECK(updates.back()["t"].get<double>() - t_start <= SessionCore::update_interval + 1e-9);
}

TEST_CASE("a slow subscriber is dropped without stalling the run") {
    SessionManager mgr;
    auto s = mgr.get(mgr.create(nlohmann::json{{"time_scale", 0}}));
    s->submit_polygon(rect, 2.0, 0.0);
    auto slow = s->subscribe(8);
    auto fast = s->subscribe(100000);
    s->start();
    REQUIRE(s->wait_for(SessionState::Finished, 20s));
    CHECK(slow->closed());
    CHECK_FALSE(fast->closed());
    const auto all = drain(*fast);
    CHECK(all.back()["session_state"] == "Finished");
}

TEST_CASE("replanning from Paused keeps pose and coverage") {
    SessionCore core(fast_config());
    core.submit_polygon(rect, 2.0, 0.0);
    core.start();
    for (int i = 0; i < 1500; ++i) core.advance();
    core.pause();
    const StateUpdate before = core.snapshot();
    CHECK(before.coverage > 0.0);
    const planner::CoveragePlan& plan = core.submit_polygon({{0, 0}, {20, 0}, {20, 6}, {0, 6}}, 2.0, 0.0);
    CHECK(plan.swaths.size() == 3);
    CHECK(plan.waypoints.front() == Point2{before.x, before.y});
    const StateUpdate after = core.snapshot();
    CHECK(after.state == SessionState::Planned);
    CHECK(after.x == before.x);
    CHECK(after.y == before.y);
    CHECK(after.t == before.t);
    CHECK(after.coverage > 0.0);
    // the trail covered the bottom swaths of the old field, all within the new one
    CHECK(after.coverage >= before.coverage);
    core.start();
    double prev = after.coverage;
    while (core.state() == SessionState::Running) {
        core.advance();
        const double c = core.snapshot().coverage;
        REQUIRE(c >= prev);
        prev = c;
    }
    CHECK(core.state() == SessionState::Finished);
    CHECK(prev >= 0.95);
}

TEST_CASE("idle sessions expire") {
    auto now = std::chrono::steady_clock::time_point{} + 1h;
    SessionManager mgr([&] { return now; }, std::chrono::minutes(30));
    const std::string idle = mgr.create(nlohmann::json::object());
    const std::string busy = mgr.create(nlohmann::json{{"time_scale", 1}});
    auto b = mgr.get(busy);
    b->submit_polygon(rect, 2.0, 0.0);
    b->start();
    now += std::chrono::minutes(20);
    CHECK(mgr.expire() == 0);
    mgr.get(idle);
    now += std::chrono::minutes(20);
    CHECK(mgr.expire() == 0);
    now += std::chrono::minutes(11);
    CHECK(mgr.expire() == 1);
    CHECK_THROWS_AS(mgr.get(idle), UnknownSession);
    CHECK(mgr.get(busy)->state() == SessionState::Running);
}

TEST_CASE("update channel") {
    UpdateChannel ch(2);
    CHECK(ch.push("a"));
    CHECK(ch.push("b"));
    CHECK_FALSE(ch.push("c"));
    CHECK(ch.closed());
    CHECK_FALSE(ch.push("d"));
    CHECK_FALSE(ch.pop(10ms));
}

TEST_CASE("soft real time") {
    SessionManager mgr;
    auto s = mgr.get(mgr.create(nlohmann::json{{"time_scale", 1}}));
    s->submit_polygon(rect, 2.0, 0.0);
    auto ch = s->subscribe(100000);
    const auto wall0 = std::chrono::steady_clock::now();
    s->start();
    std::this_thread::sleep_for(60s);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    s->pause();
    const auto updates = drain(*ch, 200ms);
    double t_last = 0.0;
    for (const auto& u : updates) t_last = std::max(t_last, u["t"].get<double>());
    MESSAGE("simulated " << t_last << " s in " << wall << " s wall");
    CHECK(std::abs(t_last - wall) / wall < 0.05);
}
