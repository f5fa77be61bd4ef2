#include "painterly/server.hpp"

#include "painterly/config.hpp"
#include "painterly/error.hpp"

#include <boost/asio/dispatch.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <spdlog/spdlog.h>

#include <atomic>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

namespace painterly {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

class ViewerConnection;

/// Shared by every connection: the session inbox, the hello text, the
/// registry of live viewers.
struct Hub {
    Session* session = nullptr;
    std::string hello;
    std::filesystem::path webRoot;

    std::mutex mutex;
    std::vector<std::weak_ptr<ViewerConnection>> viewers;

    void add(const std::shared_ptr<ViewerConnection>& v) {
        std::lock_guard lock(mutex);
        viewers.push_back(v);
    }

    std::vector<std::shared_ptr<ViewerConnection>> live() {
        std::lock_guard lock(mutex);
        std::vector<std::shared_ptr<ViewerConnection>> out;
        std::erase_if(viewers, [&](const auto& w) {
            auto s = w.lock();
            if (!s) return true;
            out.push_back(std::move(s));
            return false;
        });
        return out;
    }
};

class ViewerConnection : public std::enable_shared_from_this<ViewerConnection> {
public:
    ViewerConnection(tcp::socket&& socket, Hub& hub) : ws_(std::move(socket)), hub_(hub) {}

    void accept(http::request<http::string_body> req) {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(req, beast::bind_front_handler(&ViewerConnection::on_accept, shared_from_this()));
    }

    void deliver(SnapshotQueue::Message msg) {
        net::post(ws_.get_executor(), [self = shared_from_this(), msg = std::move(msg)]() mutable {
            if (self->closed_) return;
            self->snapshots_.push(std::move(msg));
            self->write_next();
        });
    }

private:
    void on_accept(beast::error_code ec) {
        if (ec) {
            spdlog::debug("websocket handshake failed: {}", ec.message());
            return;
        }
        ws_.text(true);
        replies_.push_back(std::make_shared<const std::string>(hub_.hello));
        hub_.add(shared_from_this());
        spdlog::info("viewer connected");
        write_next();
        read_next();
    }

    void read_next() {
        ws_.async_read(buffer_, beast::bind_front_handler(&ViewerConnection::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t) {
        if (ec) {
            close(ec);
            return;
        }
        const auto text = beast::buffers_to_string(buffer_.data());
        buffer_.consume(buffer_.size());
        const auto ack = hub_.session->submit_control(text);
        if (ack.status == AckStatus::Error) spdlog::debug("malformed control: {}", ack.detail);
        replies_.push_back(std::make_shared<const std::string>(encode_ack(ack)));
        write_next();
        read_next();
    }

    // Acks go out ahead of queued snapshots; one write in flight at a time.
    void write_next() {
        if (writing_ || closed_) return;
        SnapshotQueue::Message next;
        if (!replies_.empty()) {
            next = std::move(replies_.front());
            replies_.pop_front();
        } else {
            next = snapshots_.pop();
        }
        if (!next) return;
        writing_ = true;
        ws_.async_write(net::buffer(*next),
                        [self = shared_from_this(), next](beast::error_code ec, std::size_t) {
                            self->writing_ = false;
                            if (ec) {
                                self->close(ec);
                                return;
                            }
                            self->write_next();
                        });
    }

    void close(beast::error_code ec) {
        if (closed_) return;
        closed_ = true;
        if (ec != websocket::error::closed) spdlog::debug("viewer dropped: {}", ec.message());
        spdlog::info("viewer disconnected");
    }

    websocket::stream<beast::tcp_stream> ws_;
    Hub& hub_;
    beast::flat_buffer buffer_;
    std::deque<SnapshotQueue::Message> replies_;
    SnapshotQueue snapshots_;
    bool writing_ = false;
    bool closed_ = false;
};

std::string_view mime_type(const std::filesystem::path& p) {
    const auto ext = p.extension().string();
    if (ext == ".html") return "text/html";
    if (ext == ".js" || ext == ".mjs") return "application/javascript";
    if (ext == ".css") return "text/css";
    if (ext == ".json") return "application/json";
    if (ext == ".png") return "image/png";
    if (ext == ".svg") return "image/svg+xml";
    return "application/octet-stream";
}

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
public:
    HttpConnection(tcp::socket&& socket, Hub& hub) : stream_(std::move(socket)), hub_(hub) {}

    void run() {
        net::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpConnection::read_next, shared_from_this()));
    }

private:
    void read_next() {
        req_ = {};
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpConnection::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t) {
        if (ec == http::error::end_of_stream) {
            stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
            return;
        }
        if (ec) return;

        if (websocket::is_upgrade(req_) && req_.target() == "/ws") {
            stream_.expires_never();
            std::make_shared<ViewerConnection>(stream_.release_socket(), hub_)->accept(std::move(req_));
            return;
        }
        respond();
    }

    void respond() {
        auto res = std::make_shared<http::response<http::string_body>>();
        res->version(req_.version());
        res->keep_alive(req_.keep_alive());
        res->set(http::field::server, "painterly");

        std::string target(req_.target());
        if (const auto q = target.find('?'); q != std::string::npos) target.resize(q);
        if (target.empty() || target.back() == '/') target += "index.html";

        const std::filesystem::path rel = std::filesystem::path(target).relative_path();
        bool traversal = false;
        for (const auto& part : rel)
            if (part == "..") traversal = true;

        const auto path = hub_.webRoot / rel;
        std::ifstream in(path, std::ios::binary);
        if (req_.method() != http::verb::get || traversal || hub_.webRoot.empty() || !in ||
            !std::filesystem::is_regular_file(path)) {
            res->result(req_.method() != http::verb::get ? http::status::method_not_allowed : http::status::not_found);
            res->set(http::field::content_type, "text/plain");
            res->body() = "not found\n";
        } else {
            std::ostringstream body;
            body << in.rdbuf();
            res->result(http::status::ok);
            res->set(http::field::content_type, std::string(mime_type(path)));
            res->body() = body.str();
        }
        res->prepare_payload();
        http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
            if (ec) return;
            if (!res->keep_alive()) {
                self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
                return;
            }
            self->read_next();
        });
    }

    beast::tcp_stream stream_;
    Hub& hub_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> req_;
};

}  // namespace

struct Server::Impl {
    SessionConfig cfg;
    Session session;
    net::io_context ioc;
    tcp::acceptor acceptor{ioc};
    Hub hub;

    std::vector<std::thread> ioThreads;
    std::thread simThread;
    std::atomic<bool> running{false};
    std::atomic<std::uint64_t> tick{0};
    std::mutex stopMutex;
    std::condition_variable stopped;
    bool stopRequested = false;

    explicit Impl(SessionConfig c) : cfg(std::move(c)), session(cfg) {
        hub.session = &session;
        hub.hello = session.hello();
        hub.webRoot = cfg.webRoot;

        const auto [host, port] = split_listen_address(cfg.listenAddress);
        beast::error_code ec;
        const auto address = net::ip::make_address(host == "localhost" ? "127.0.0.1" : host, ec);
        if (ec) throw Error(ErrorCode::BindError, "bad listen host '" + host + "'");
        const tcp::endpoint endpoint{address, port};
        acceptor.open(endpoint.protocol(), ec);
        if (!ec) acceptor.set_option(net::socket_base::reuse_address(true), ec);
        if (!ec) acceptor.bind(endpoint, ec);
        if (!ec) acceptor.listen(net::socket_base::max_listen_connections, ec);
        if (ec) throw Error(ErrorCode::BindError, cfg.listenAddress + ": " + ec.message());
    }

    void accept_next() {
        acceptor.async_accept(net::make_strand(ioc), [self = this](beast::error_code ec, tcp::socket s) {
            if (ec) {
                if (ec != net::error::operation_aborted) spdlog::warn("accept failed: {}", ec.message());
                if (!self->acceptor.is_open()) return;
            } else {
                std::make_shared<HttpConnection>(std::move(s), self->hub)->run();
            }
            self->accept_next();
        });
    }

    void simulate() {
        using clock = std::chrono::steady_clock;
        const auto period = std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(1.0 / cfg.tickRate));
        auto next = clock::now();
        while (running) {
            const auto world = session.step();
            tick = world->tick;
            auto msg = std::make_shared<const std::string>(encode_state(*world, cfg.snapshotPointBudget));
            for (const auto& viewer : hub.live()) viewer->deliver(msg);

            next += period;
            const auto now = clock::now();
            if (next < now - 4 * period) next = now;  // fell far behind; do not try to catch up
            std::unique_lock lock(stopMutex);
            stopped.wait_until(lock, next, [&] { return stopRequested; });
        }
    }
};

Server::Server(SessionConfig cfg) : impl_(std::make_shared<Impl>(std::move(cfg))) {}

Server::~Server() { stop(); }

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::start(std::size_t ioThreads) {
    if (impl_->running.exchange(true)) return;
    impl_->accept_next();
    for (std::size_t i = 0; i < std::max<std::size_t>(ioThreads, 1); ++i)
        impl_->ioThreads.emplace_back([impl = impl_.get()] { impl->ioc.run(); });
    impl_->simThread = std::thread([impl = impl_.get()] { impl->simulate(); });
    spdlog::info("serving {} session on {} (port {})", to_string(impl_->session.mode()), impl_->cfg.listenAddress,
                 port());
}

void Server::wait() {
    std::unique_lock lock(impl_->stopMutex);
    impl_->stopped.wait(lock, [&] { return impl_->stopRequested; });
}

void Server::stop() {
    {
        std::lock_guard lock(impl_->stopMutex);
        impl_->stopRequested = true;
    }
    impl_->stopped.notify_all();
    impl_->running = false;
    if (impl_->simThread.joinable()) impl_->simThread.join();
    beast::error_code ec;
    impl_->acceptor.close(ec);
    impl_->ioc.stop();
    for (auto& t : impl_->ioThreads)
        if (t.joinable()) t.join();
    impl_->ioThreads.clear();
}

std::size_t Server::client_count() const { return impl_->hub.live().size(); }

std::uint64_t Server::tick() const { return impl_->tick; }

}  // namespace painterly
