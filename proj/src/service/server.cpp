#include "agrosim/service/server.hpp"

#include "agrosim/error.hpp"
#include "agrosim/service/api.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <set>
#include <thread>

namespace agrosim::service {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

struct HttpServer::Impl {
    SessionManager& sessions;
    std::string address;
    unsigned short requested_port;

    asio::io_context io;
    std::unique_ptr<tcp::acceptor> acceptor;
    std::thread accept_thread;
    std::atomic<bool> stopping{false};
    unsigned short bound_port = 0;

    std::mutex conn_m;
    std::condition_variable conn_cv;
    std::set<std::shared_ptr<tcp::socket>> connections;

    Impl(SessionManager& s, std::string a, unsigned short p) : sessions(s), address(std::move(a)), requested_port(p) {}

    void accept_next() {
        auto sock = std::make_shared<tcp::socket>(io);
        acceptor->async_accept(*sock, [this, sock](beast::error_code ec) {
            if (ec || stopping) return;
            {
                std::lock_guard lk(conn_m);
                connections.insert(sock);
            }
            std::thread([this, sock] {
                serve(*sock);
                beast::error_code ignored;
                sock->shutdown(tcp::socket::shutdown_both, ignored);
                sock->close(ignored);
                {
                    std::lock_guard lk(conn_m);
                    connections.erase(sock);
                }
                conn_cv.notify_all();
            }).detach();
            accept_next();
        });
    }

    template <typename Body>
    static void decorate(http::response<Body>& res, unsigned version, bool keep_alive) {
        res.version(version);
        res.set(http::field::server, "agrosim");
        res.set(http::field::access_control_allow_origin, "*");
        res.set(http::field::access_control_allow_methods, "GET, POST, OPTIONS");
        res.set(http::field::access_control_allow_headers, "Content-Type");
        res.keep_alive(keep_alive);
    }

    http::response<http::string_body> respond(const http::request<http::string_body>& req) {
        http::response<http::string_body> res;
        decorate(res, req.version(), req.keep_alive());
        if (req.method() == http::verb::options) {
            res.result(http::status::no_content);
            return res;
        }
        const ApiResponse api = handle_request(sessions, std::string(req.method_string()), std::string(req.target()),
                                               req.body());
        res.result(static_cast<http::status>(api.status));
        res.set(http::field::content_type, "application/json");
        res.body() = api.body.dump();
        res.prepare_payload();
        return res;
    }

    void serve(tcp::socket& sock) {
        beast::flat_buffer buffer;
        for (;;) {
            http::request<http::string_body> req;
            beast::error_code ec;
            http::read(sock, buffer, req, ec);
            if (ec || stopping) return;
            if (websocket::is_upgrade(req)) {
                stream(sock, std::move(req));
                return;
            }
            auto res = respond(req);
            http::write(sock, res, ec);
            if (ec || !res.keep_alive()) return;
        }
    }

    void reject(tcp::socket& sock, const http::request<http::string_body>& req, int status, const std::string& kind,
                const std::string& detail) {
        http::response<http::string_body> res;
        decorate(res, req.version(), false);
        res.result(static_cast<http::status>(status));
        res.set(http::field::content_type, "application/json");
        res.body() = nlohmann::json{{"error", kind}, {"detail", detail}}.dump();
        res.prepare_payload();
        beast::error_code ec;
        http::write(sock, res, ec);
    }

    void stream(tcp::socket& sock, http::request<http::string_body> req) {
        const auto id = stream_target(std::string(req.target()));
        if (!id) return reject(sock, req, 404, "NotFound", "no such stream");
        std::shared_ptr<Session> session;
        try {
            session = sessions.get(*id);
        } catch (const UnknownSession& e) {
            return reject(sock, req, 404, "UnknownSession", e.what());
        }

        websocket::stream<tcp::socket&> ws(sock);
        beast::error_code ec;
        ws.accept(req, ec);
        if (ec) return;
        ws.text(true);
        const auto channel = session->subscribe();
        while (!stopping) {
            if (sock.available(ec) > 0) {
                // client frames are ignored, but a close must be answered
                beast::flat_buffer incoming;
                ws.read(incoming, ec);
                if (ec) break;
                continue;
            }
            if (ec) break;
            if (auto msg = channel->pop(std::chrono::milliseconds(50))) {
                ws.write(asio::buffer(*msg), ec);
                if (ec) break;
            } else if (channel->closed()) {
                ws.close(websocket::close_reason(websocket::close_code::policy_error, "subscriber too slow"), ec);
                break;
            }
        }
        channel->close();
        if (stopping) ws.close(websocket::close_code::going_away, ec);
    }
};

HttpServer::HttpServer(SessionManager& sessions, std::string address, unsigned short port)
    : impl_(std::make_unique<Impl>(sessions, std::move(address), port)) {}

HttpServer::~HttpServer() {
    stop();
}

void HttpServer::start() {
    auto& d = *impl_;
    const tcp::endpoint ep(asio::ip::make_address(d.address), d.requested_port);
    d.acceptor = std::make_unique<tcp::acceptor>(d.io);
    d.acceptor->open(ep.protocol());
    d.acceptor->set_option(asio::socket_base::reuse_address(true));
    d.acceptor->bind(ep);
    d.acceptor->listen();
    d.bound_port = d.acceptor->local_endpoint().port();
    d.accept_next();
    d.accept_thread = std::thread([&d] { d.io.run(); });
}

unsigned short HttpServer::port() const {
    return impl_->bound_port;
}

void HttpServer::stop() {
    auto& d = *impl_;
    if (d.stopping.exchange(true)) return;
    asio::post(d.io, [&d] {
        beast::error_code ec;
        if (d.acceptor) d.acceptor->close(ec);
    });
    if (d.accept_thread.joinable()) d.accept_thread.join();
    std::unique_lock lk(d.conn_m);
    for (const auto& s : d.connections) {
        beast::error_code ec;
        s->shutdown(tcp::socket::shutdown_both, ec);
    }
    d.conn_cv.wait(lk, [&d] { return d.connections.empty(); });
}

unsigned short port_from_env() {
    const char* v = std::getenv("AGROSIM_PORT");
    if (!v || !*v) return 8080;
    char* end = nullptr;
    const long p = std::strtol(v, &end, 10);
    if (*end != '\0' || p < 0 || p > 65535) throw ValidationError("AGROSIM_PORT", std::string("not a port: ") + v);
    return static_cast<unsigned short>(p);
}

} // namespace agrosim::service
