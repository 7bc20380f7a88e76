#pragma once

#include "agrosim/service/session_core.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace agrosim::service {

/// Bounded message queue between a session executor and one subscriber.
/// Overflowing closes the channel: a slow reader is dropped instead of
/// stalling the simulation.
class UpdateChannel {
public:
    explicit UpdateChannel(std::size_t capacity = 256) : capacity_(capacity) {}

    /// False (and the channel closed) when the queue was full or already closed.
    bool push(std::string message);
    /// Next message; nullopt on timeout or once closed and drained.
    std::optional<std::string> pop(std::chrono::milliseconds timeout);
    void close();
    bool closed() const;
    std::size_t pending() const;

private:
    mutable std::mutex m_;
    std::condition_variable cv_;
    std::deque<std::string> queue_;
    std::size_t capacity_;
    bool closed_ = false;
};

/// A SessionCore driven by its own executor thread.
///
/// Commands are queued to the executor and applied in order between DE
/// rounds; the calling thread waits for the result. While Running the executor
/// steps the engine paced at `time_scale` simulated seconds per wall second,
/// or as fast as possible when time_scale is 0.
class Session {
public:
    Session(std::string id, scenario::ScenarioConfig base, double time_scale);
    ~Session();

    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    const std::string& id() const { return id_; }
    double time_scale() const { return time_scale_; }

    nlohmann::json submit_polygon(std::vector<planner::Point2> vertices, double width, double direction);
    SessionState start();
    SessionState pause();
    SessionState reset();
    /// Full snapshot: state, latest update, plan and resolved scenario.
    nlohmann::json snapshot();

    /// New subscriber; it first receives the current snapshot update.
    std::shared_ptr<UpdateChannel> subscribe(std::size_t capacity = 256);

    /// Last state seen by the executor (no round trip).
    SessionState state() const { return state_.load(); }
    /// Blocks until the session reaches `s` or the timeout expires.
    bool wait_for(SessionState s, std::chrono::milliseconds timeout);

    /// Installs a trace-record sink on the executor thread.
    void set_record_sink(std::function<void(const cosim::TraceRecord&)> sink);
    /// Runs `f` on the executor with exclusive access to the core.
    template <typename F>
    auto with_core(F f) -> decltype(f(std::declval<SessionCore&>())) {
        return call([&](SessionCore& c) { return f(c); });
    }

private:
    template <typename F>
    auto call(F&& f) -> decltype(f(std::declval<SessionCore&>()));

    void run();
    void publish(const StateUpdate& u);
    void sync_state();

    std::string id_;
    double time_scale_;
    SessionCore core_; // executor thread only

    std::mutex m_;
    std::condition_variable cv_;
    std::deque<std::function<void()>> tasks_;
    bool stop_ = false;

    std::vector<std::shared_ptr<UpdateChannel>> subscribers_; // executor thread only
    std::chrono::steady_clock::time_point anchor_wall_;
    double anchor_sim_ = 0.0;

    std::atomic<SessionState> state_{SessionState::Idle};
    std::mutex state_m_;
    std::condition_variable state_cv_;

    std::thread executor_;
};

template <typename F>
auto Session::call(F&& f) -> decltype(f(std::declval<SessionCore&>())) {
    using R = decltype(f(std::declval<SessionCore&>()));
    std::packaged_task<R()> task([this, &f] {
        // publish the new state before the caller is released
        struct Sync {
            Session* s;
            ~Sync() { s->sync_state(); }
        } sync{this};
        return f(core_);
    });
    std::future<R> result = task.get_future();
    {
        std::lock_guard lk(m_);
        tasks_.emplace_back([&task] { task(); });
    }
    cv_.notify_all();
    return result.get();
}

/// Owns sessions, hands out ids and expires idle ones.
class SessionManager {
public:
    using Clock = std::function<std::chrono::steady_clock::time_point()>;

    explicit SessionManager(Clock clock = [] { return std::chrono::steady_clock::now(); },
                            std::chrono::seconds idle_timeout = std::chrono::minutes(30));

    /// Body {scenario?, time_scale?}. Throws ValidationError.
    std::string create(const nlohmann::json& body);
    std::string create(scenario::ScenarioConfig cfg, double time_scale);
    /// Throws UnknownSession. Counts as activity.
    std::shared_ptr<Session> get(const std::string& id);
    /// Removes sessions that are not Running and saw no activity for the idle timeout.
    std::size_t expire();
    std::size_t size() const;

private:
    struct Entry {
        std::shared_ptr<Session> session;
        std::chrono::steady_clock::time_point last_activity;
    };

    std::string new_id();

    Clock clock_;
    std::chrono::seconds idle_timeout_;
    mutable std::mutex m_;
    std::map<std::string, Entry> sessions_;
    std::mt19937_64 rng_;
};

} // namespace agrosim::service
