#pragma once

#include "painterly/depth.hpp"
#include "painterly/embodiment.hpp"
#include "painterly/metrics.hpp"
#include "painterly/particles.hpp"
#include "painterly/render.hpp"
#include "painterly/scene.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace painterly {

enum class SourceMode { Synthetic, Recording };

std::string_view to_string(SourceMode mode) noexcept;

struct SessionConfig {
    SourceMode source = SourceMode::Synthetic;
    std::filesystem::path recordingPath;
    std::uint64_t seed = 42;
    double tickRate = 60.0;
    FilterConfig filter;
    MappingConfig mapping;
    ParticleSystemConfig physics;
    EmitterParams emitterDetection;
    SynthConfig synth;
    Camera camera;
    RenderStyle style;
    std::filesystem::path scenePath;
    std::string listenAddress = "127.0.0.1:8080";
    std::size_t snapshotPointBudget = 2000;
    std::filesystem::path webRoot;

    /// Throws Error{BadConfig} naming the first offending field.
    void validate() const;
};

// ---------------------------------------------------------------------------
// Wire protocol
// ---------------------------------------------------------------------------

struct ControlMessage {
    std::optional<double> moveX;      // meters
    std::optional<double> moveDepth;  // millimeters
    std::optional<bool> jump;
    std::optional<bool> leftHand;
    std::optional<bool> rightHand;
};

/// Throws Error{MalformedControl} for anything that is not a well-typed
/// {"type":"control", ...} object.
ControlMessage parse_control(std::string_view text);

enum class AckStatus { Ok, Ignored, Error };

struct Ack {
    AckStatus status = AckStatus::Ok;
    std::string detail;
};

std::string encode_ack(const Ack& ack);

/// State message with fixed field order and 4-decimal rounding.
std::string encode_state(const WorldState& world, std::size_t budget);

struct SnapshotParticle {
    WorldPoint position;
    std::string kind;
    double lifespan = 0.0;
};

/// Client-side view of a decoded state message.
struct Snapshot {
    std::uint64_t tick = 0;
    std::vector<WorldPoint> cloud;
    std::vector<SnapshotParticle> particles;
    std::optional<WorldPoint> head;
    std::vector<WorldPoint> hands;
    std::optional<PerformerState> performer;
};

/// Throws Error{SchemaError}.
Snapshot decode_state(std::string_view text);

std::string encode_hello(const PainterlyScene& scene, const SessionConfig& cfg);

// ---------------------------------------------------------------------------
// Session
// ---------------------------------------------------------------------------

inline constexpr double kMaxSlewMetersPerSecond = 2.0;
inline constexpr double kJumpDuration = 0.6;  // seconds

/// Synthetic performer with slew-limited targets and a timed jump arc.
struct PerformerController {
    PerformerState state;
    double targetX = 0.0;
    double targetDepth = 2000.0;
    std::optional<double> jumpElapsed;  // set while airborne

    void apply(const ControlMessage& msg, const SynthConfig& synth);
    void advance(double dt);
};

struct AppliedControl {
    std::uint64_t tick = 0;  // tick at which the control took effect
    ControlMessage message;
};

/// One simulation loop: ingest -> extract -> map -> detect -> particles ->
/// compose. Single writer; submit_control() may be called from any thread.
class Session {
public:
    /// Loads the scene (and recording, in recording mode). Throws Error.
    explicit Session(SessionConfig cfg);
    Session(SessionConfig cfg, std::shared_ptr<const PainterlyScene> scene);

    /// Advances exactly one tick and returns the composed world.
    std::shared_ptr<const WorldState> step();

    /// Parses and queues a control; it takes effect at the next tick boundary.
    Ack submit_control(std::string_view text);

    std::uint64_t tick() const noexcept { return tick_; }
    SourceMode mode() const noexcept { return cfg_.source; }
    const SessionConfig& config() const noexcept { return cfg_; }
    const PainterlyScene& scene() const noexcept { return *scene_; }
    std::shared_ptr<const PainterlyScene> scene_ptr() const noexcept { return scene_; }
    std::shared_ptr<const WorldState> latest() const noexcept { return latest_; }
    const ParticleSystemState& particle_state() const noexcept { return particles_; }
    const PerformerState& performer() const noexcept { return performer_.state; }
    const std::vector<AppliedControl>& control_log() const noexcept { return controlLog_; }
    StageTimings& timings() noexcept { return timings_; }
    std::size_t total_spawned() const noexcept { return totalSpawned_; }

    /// Recording frame index serving a given tick (ticks count from 1).
    std::uint32_t recording_frame_for_tick(std::uint64_t tick) const;

    /// FNV-1a over tick, particles, buffer, RNG, performer and latest world.
    std::string state_hash() const;

    std::string hello() const { return encode_hello(*scene_, cfg_); }

private:
    DepthFrame acquire(std::uint64_t tick);

    SessionConfig cfg_;
    std::shared_ptr<const PainterlyScene> scene_;
    std::optional<DepthStream> recording_;
    PerformerController performer_;
    ParticleSystemState particles_;
    std::shared_ptr<const WorldState> latest_;
    std::uint64_t tick_ = 0;
    std::size_t totalSpawned_ = 0;
    StageTimings timings_;

    std::mutex inboxMutex_;
    std::vector<ControlMessage> inbox_;
    std::vector<AppliedControl> controlLog_;
};

}  // namespace painterly
