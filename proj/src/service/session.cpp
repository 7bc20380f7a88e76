#include "agrosim/service/session.hpp"

#include "agrosim/error.hpp"

#include <cmath>
#include <cstdio>

namespace agrosim::service {

using namespace std::chrono;

bool UpdateChannel::push(std::string message) {
    {
        std::lock_guard lk(m_);
        if (closed_) return false;
        if (queue_.size() >= capacity_) {
            closed_ = true;
            queue_.clear();
            cv_.notify_all();
            return false;
        }
        queue_.push_back(std::move(message));
    }
    cv_.notify_one();
    return true;
}

std::optional<std::string> UpdateChannel::pop(milliseconds timeout) {
    std::unique_lock lk(m_);
    cv_.wait_for(lk, timeout, [&] { return !queue_.empty() || closed_; });
    if (queue_.empty()) return std::nullopt;
    std::string msg = std::move(queue_.front());
    queue_.pop_front();
    return msg;
}

void UpdateChannel::close() {
    {
        std::lock_guard lk(m_);
        closed_ = true;
    }
    cv_.notify_all();
}

bool UpdateChannel::closed() const {
    std::lock_guard lk(m_);
    return closed_;
}

std::size_t UpdateChannel::pending() const {
    std::lock_guard lk(m_);
    return queue_.size();
}

Session::Session(std::string id, scenario::ScenarioConfig base, double time_scale)
    : id_(std::move(id)), time_scale_(time_scale), core_(std::move(base)) {
    if (!(time_scale >= 0.0) || !std::isfinite(time_scale)) throw ValidationError("time_scale", "must be >= 0");
    executor_ = std::thread([this] { run(); });
}

Session::~Session() {
    {
        std::lock_guard lk(m_);
        stop_ = true;
    }
    cv_.notify_all();
    executor_.join();
    for (auto& s : subscribers_) s->close();
}

void Session::sync_state() {
    {
        std::lock_guard lk(state_m_);
        state_.store(core_.state());
    }
    state_cv_.notify_all();
}

bool Session::wait_for(SessionState s, milliseconds timeout) {
    std::unique_lock lk(state_m_);
    return state_cv_.wait_for(lk, timeout, [&] { return state_.load() == s; });
}

void Session::publish(const StateUpdate& u) {
    const std::string msg = to_json(u).dump();
    std::erase_if(subscribers_, [&](const std::shared_ptr<UpdateChannel>& ch) { return !ch->push(msg); });
}

void Session::run() {
    std::unique_lock lk(m_);
    while (!stop_) {
        if (!tasks_.empty()) {
            auto task = std::move(tasks_.front());
            tasks_.pop_front();
            lk.unlock();
            task();
            sync_state();
            lk.lock();
            continue;
        }
        if (core_.state() != SessionState::Running) {
            cv_.wait(lk, [&] { return stop_ || !tasks_.empty(); });
            continue;
        }
        int batch = 64;
        if (time_scale_ > 0.0) {
            const double next = core_.time() + core_.config().sync.de_period - anchor_sim_;
            const auto due = anchor_wall_ + duration_cast<steady_clock::duration>(duration<double>(next / time_scale_));
            if (steady_clock::now() < due) {
                cv_.wait_until(lk, due, [&] { return stop_ || !tasks_.empty(); });
                continue;
            }
            batch = 1;
        }
        lk.unlock();
        for (int i = 0; i < batch && core_.state() == SessionState::Running; ++i) {
            if (auto u = core_.advance()) publish(*u);
        }
        sync_state();
        lk.lock();
    }
}

nlohmann::json Session::submit_polygon(std::vector<planner::Point2> vertices, double width, double direction) {
    return call([&](SessionCore& c) {
        nlohmann::json plan = plan_to_json(c.submit_polygon(std::move(vertices), width, direction));
        publish(c.snapshot());
        return plan;
    });
}

SessionState Session::start() {
    return call([&](SessionCore& c) {
        const SessionState s = c.start();
        anchor_wall_ = steady_clock::now();
        anchor_sim_ = c.time();
        publish(c.snapshot());
        return s;
    });
}

SessionState Session::pause() {
    return call([&](SessionCore& c) {
        const SessionState s = c.pause();
        publish(c.snapshot());
        return s;
    });
}

SessionState Session::reset() {
    return call([&](SessionCore& c) {
        const SessionState s = c.reset();
        publish(c.snapshot());
        return s;
    });
}

nlohmann::json Session::snapshot() {
    return call([&](SessionCore& c) {
        nlohmann::json j;
        j["id"] = id_;
        j["state"] = to_string(c.state());
        j["time_scale"] = time_scale_;
        j["update"] = to_json(c.snapshot());
        j["plan"] = c.plan() ? plan_to_json(*c.plan()) : nlohmann::json(nullptr);
        j["scenario"] = scenario::to_json(c.config());
        j["failure"] = c.failure().empty() ? nlohmann::json(nullptr) : nlohmann::json(c.failure());
        return j;
    });
}

std::shared_ptr<UpdateChannel> Session::subscribe(std::size_t capacity) {
    return call([&](SessionCore& c) {
        auto ch = std::make_shared<UpdateChannel>(capacity);
        ch->push(to_json(c.snapshot()).dump());
        subscribers_.push_back(ch);
        return ch;
    });
}

void Session::set_record_sink(std::function<void(const cosim::TraceRecord&)> sink) {
    call([&](SessionCore& c) {
        c.set_record_sink(std::move(sink));
        return 0;
    });
}

SessionManager::SessionManager(Clock clock, seconds idle_timeout)
    : clock_(std::move(clock)), idle_timeout_(idle_timeout), rng_(std::random_device{}()) {}

std::string SessionManager::new_id() {
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng_()),
                  static_cast<unsigned long long>(rng_()));
    return buf;
}

std::string SessionManager::create(const nlohmann::json& body) {
    if (!body.is_null() && !body.is_object()) throw ValidationError("body", "expected an object");
    scenario::ScenarioConfig cfg = default_session_config();
    double time_scale = 1.0;
    if (body.is_object()) {
        for (const auto& [k, _] : body.items()) {
            if (k != "scenario" && k != "time_scale") throw ValidationError(k, "unknown key '" + k + "'");
        }
        if (body.contains("scenario")) cfg = scenario::scenario_from_json(body["scenario"]);
        if (body.contains("time_scale")) {
            if (!body["time_scale"].is_number()) throw ValidationError("time_scale", "expected a number");
            time_scale = body["time_scale"].get<double>();
        }
    }
    return create(std::move(cfg), time_scale);
}

std::string SessionManager::create(scenario::ScenarioConfig cfg, double time_scale) {
    expire();
    std::unique_lock lk(m_);
    std::string id;
    do {
        id = new_id();
    } while (sessions_.count(id));
    lk.unlock();
    auto session = std::make_shared<Session>(id, std::move(cfg), time_scale);
    lk.lock();
    sessions_[id] = {std::move(session), clock_()};
    return id;
}

std::shared_ptr<Session> SessionManager::get(const std::string& id) {
    expire();
    std::lock_guard lk(m_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw UnknownSession(id);
    it->second.last_activity = clock_();
    return it->second.session;
}

std::size_t SessionManager::expire() {
    std::vector<std::shared_ptr<Session>> dropped;
    {
        std::lock_guard lk(m_);
        const auto now = clock_();
        for (auto it = sessions_.begin(); it != sessions_.end();) {
            auto& e = it->second;
            if (e.session->state() == SessionState::Running) {
                e.last_activity = now;
            } else if (now - e.last_activity > idle_timeout_) {
                dropped.push_back(std::move(e.session));
                it = sessions_.erase(it);
                continue;
            }
            ++it;
        }
    }
    // sessions are destroyed (executor joined) outside the lock
    return dropped.size();
}

std::size_t SessionManager::size() const {
    std::lock_guard lk(m_);
    return sessions_.size();
}

} // namespace agrosim::service
