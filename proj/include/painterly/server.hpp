#pragma once

#include "painterly/session.hpp"

#include <cstddef>
#include <deque>
#include <memory>
#include <string>

namespace painterly {

inline constexpr std::size_t kClientQueueDepth = 8;

/// Per-client outbound snapshot queue; beyond capacity the oldest snapshot is
/// dropped so a slow viewer never stalls the simulation loop. Not
/// synchronized: each client touches its queue only from its own strand.
class SnapshotQueue {
public:
    using Message = std::shared_ptr<const std::string>;

    explicit SnapshotQueue(std::size_t capacity = kClientQueueDepth) : capacity_(capacity) {}

    void push(Message msg) {
        if (queue_.size() == capacity_) {
            queue_.pop_front();
            ++dropped_;
        }
        queue_.push_back(std::move(msg));
    }

    Message pop() {
        if (queue_.empty()) return nullptr;
        auto msg = std::move(queue_.front());
        queue_.pop_front();
        return msg;
    }

    std::size_t size() const noexcept { return queue_.size(); }
    std::size_t dropped() const noexcept { return dropped_; }

private:
    std::size_t capacity_;
    std::deque<Message> queue_;
    std::size_t dropped_ = 0;
};

/// Live session host: HTTP static files under "/", the state stream on "/ws",
/// and the wall-clock-paced tick loop.
class Server {
public:
    /// Builds the session and binds the listener. Port 0 picks a free port.
    /// Throws Error{BadConfig | BindError} and any session startup error.
    explicit Server(SessionConfig cfg);
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    unsigned short port() const;

    /// Starts network threads and the simulation loop; returns immediately.
    void start(std::size_t ioThreads = 1);

    /// Blocks until stop() is called (e.g. from a signal handler).
    void wait();
    void stop();

    std::size_t client_count() const;
    std::uint64_t tick() const;

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

}  // namespace painterly
