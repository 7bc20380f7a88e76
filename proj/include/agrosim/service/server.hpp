#pragma once

#include "agrosim/service/session.hpp"

#include <memory>
#include <string>

namespace agrosim::service {

/// HTTP + WebSocket front end over a SessionManager (Boost.Beast).
///
/// Accepting runs on an internal thread; each connection is served by its own
/// thread with blocking I/O.
class HttpServer {
public:
    HttpServer(SessionManager& sessions, std::string address = "0.0.0.0", unsigned short port = 8080);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds and starts accepting. Port 0 picks a free port.
    void start();
    /// Actual bound port (valid after start).
    unsigned short port() const;
    /// Closes the listener and all open connections, then waits for their threads.
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Port from AGROSIM_PORT, 8080 when unset. Throws ValidationError for junk values.
unsigned short port_from_env();

} // namespace agrosim::service
