#include "doctest.h"
#include "oracles.hpp"

#include "painterly/error.hpp"
#include "painterly/server.hpp"

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <chrono>
#include <fstream>
#include <thread>

using namespace painterly;
using nlohmann::json;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

SessionConfig server_config(const std::filesystem::path& webRoot) {
    SessionConfig cfg;
    cfg.scenePath = std::filesystem::path(PAINTERLY_DATA_DIR) / "scenes" / "courtyard.json";
    cfg.listenAddress = "127.0.0.1:0";
    cfg.webRoot = webRoot;
    return cfg;
}

struct Client {
    net::io_context ioc;
    websocket::stream<tcp::socket> ws{ioc};

    explicit Client(unsigned short port) {
        tcp::resolver resolver(ioc);
        net::connect(ws.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
        ws.handshake("127.0.0.1", "/ws");
    }

    json read() {
        beast::flat_buffer buf;
        ws.read(buf);
        return json::parse(beast::buffers_to_string(buf.data()));
    }

    void send(const std::string& text) { ws.write(net::buffer(text)); }

    /// Reads until a message of the given type arrives, collecting states on the way.
    json read_until(const std::string& type, std::vector<json>* states = nullptr) {
        for (int i = 0; i < 600; ++i) {
            auto j = read();
            if (j["type"] == type) return j;
            if (states && j["type"] == "state") states->push_back(j);
        }
        FAIL("no " << type << " message");
        return {};
    }
};

http::response<http::string_body> http_get(unsigned short port, const std::string& target) {
    net::io_context ioc;
    beast::tcp_stream stream(ioc);
    tcp::resolver resolver(ioc);
    stream.connect(resolver.resolve("127.0.0.1", std::to_string(port)));
    http::request<http::empty_body> req{http::verb::get, target, 11};
    req.set(http::field::host, "127.0.0.1");
    http::write(stream, req);
    beast::flat_buffer buf;
    http::response<http::string_body> res;
    http::read(stream, buf, res);
    beast::error_code ec;
    stream.socket().shutdown(tcp::socket::shutdown_both, ec);
    return res;
}

template <class Pred>
bool eventually(Pred pred) {
    for (int i = 0; i < 300; ++i) {
        if (pred()) return true;
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    return false;
}

}  // namespace

TEST_CASE("snapshot queue drops the oldest entry") {
    SnapshotQueue q(3);
    for (int i = 0; i < 5; ++i) q.push(std::make_shared<const std::string>(std::to_string(i)));
    CHECK(q.size() == 3);
    CHECK(q.dropped() == 2);
    CHECK(*q.pop() == "2");
    CHECK(*q.pop() == "3");
    CHECK(*q.pop() == "4");
    CHECK(q.pop() == nullptr);
}

TEST_CASE("bind failures are reported") {
    auto cfg = server_config(oracle::temp_dir("bind"));
    cfg.listenAddress = "not-an-ip:0";
    CHECK_THROWS_AS(Server{cfg}, Error);
}

TEST_CASE("live websocket session") {
    Server server(server_config(oracle::temp_dir("ws")));
    server.start();
    REQUIRE(server.port() != 0);

    Client client(server.port());
    const auto hello = client.read();
    CHECK(hello["type"] == "hello");
    CHECK(hello["mode"] == "synthetic");
    CHECK(hello["scene"]["facades"].size() == 3);

    SUBCASE("ticks increase") {
        std::uint64_t last = 0;
        for (int i = 0; i < 10; ++i) {
            const auto s = client.read_until("state");
            CHECK(s["tick"].get<std::uint64_t>() > last);
            last = s["tick"];
            CHECK(s.contains("performer"));
        }
    }
    SUBCASE("jump is acknowledged and visible within three ticks") {
        client.read_until("state");
        client.send(R"({"type":"control","jump":true})");
        std::vector<json> before;
        const auto ack = client.read_until("ack", &before);
        CHECK(ack["status"] == "ok");
        std::uint64_t sentAt = before.empty() ? 0 : before.back()["tick"].get<std::uint64_t>();
        bool airborne = false;
        for (int i = 0; i < 12 && !airborne; ++i) {
            const auto s = client.read_until("state");
            if (s["performer"]["jumpPhase"].get<double>() > 0.0) {
                airborne = true;
                // Acks precede snapshots, so at most a few queued states predate the control.
                CHECK(s["tick"].get<std::uint64_t>() <= sentAt + 3 + kClientQueueDepth);
            }
        }
        CHECK(airborne);
    }
    SUBCASE("malformed controls get an error ack and the stream continues") {
        client.send("{\"type\":\"control\",\"jump\":42}");
        const auto ack = client.read_until("ack");
        CHECK(ack["status"] == "error");
        CHECK(ack.contains("detail"));
        client.send("garbage");
        CHECK(client.read_until("ack")["status"] == "error");
        CHECK(client.read_until("state")["type"] == "state");
    }
    SUBCASE("one viewer leaving does not disturb another") {
        Client second(server.port());
        CHECK(second.read()["type"] == "hello");
        CHECK(eventually([&] { return server.client_count() == 2; }));
        second.ws.close(websocket::close_code::normal);
        CHECK(eventually([&] { return server.client_count() == 1; }));
        const auto a = client.read_until("state")["tick"].get<std::uint64_t>();
        const auto b = client.read_until("state")["tick"].get<std::uint64_t>();
        CHECK(b > a);
    }
    server.stop();
}

TEST_CASE("static files") {
    const auto root = oracle::temp_dir("web");
    std::ofstream(root / "index.html") << "<html>mirror</html>";
    std::filesystem::create_directories(root / "js");
    std::ofstream(root / "js" / "app.js") << "console.log(1);";
    Server server(server_config(root));
    server.start();

    const auto index = http_get(server.port(), "/");
    CHECK(index.result() == http::status::ok);
    CHECK(index.body() == "<html>mirror</html>");
    CHECK(std::string(index[http::field::content_type]).find("text/html") != std::string::npos);

    const auto js = http_get(server.port(), "/js/app.js");
    CHECK(js.result() == http::status::ok);
    CHECK(std::string(js[http::field::content_type]).find("javascript") != std::string::npos);

    CHECK(http_get(server.port(), "/missing.css").result() == http::status::not_found);
    CHECK(http_get(server.port(), "/../etc/passwd").result() != http::status::ok);
    server.stop();
}
