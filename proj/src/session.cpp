#include "painterly/session.hpp"

#include "painterly/error.hpp"
#include "painterly/hash.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace painterly {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(SourceMode mode) noexcept {
    return mode == SourceMode::Synthetic ? "synthetic" : "recording";
}

void SessionConfig::validate() const {
    auto bad = [](const std::string& what) { throw Error(ErrorCode::BadConfig, what); };
    if (!(tickRate > 0.0)) bad("tickRate must be positive");
    if (snapshotPointBudget < 1) bad("snapshotPointBudget must be at least 1");
    if (!filter.valid()) bad("filter: epsilon >= 0, depthThreshold > 0, stride >= 1 required");
    if (!mapping.valid()) bad("mapping: scale factors must be positive");
    if (!physics.valid()) bad("physics: particleNum >= 1, bufferInit >= 0, dt > 0, restitution in [0,1] required");
    if (!camera.valid()) bad("camera: focal length and image size must be positive");
    if (synth.frameWidth == 0 || synth.frameHeight == 0 || synth.bodyHeightPx == 0 || synth.bodyWidthPx == 0 ||
        synth.headRadiusPx == 0 || synth.armLengthPx == 0 || synth.armWidthPx == 0)
        bad("synth: dimensions must be positive");
    if (source == SourceMode::Recording && recordingPath.empty()) bad("recording mode needs a recording path");
    if (scenePath.empty()) bad("scenePath is required");
}

// ---------------------------------------------------------------------------

namespace {

double round4(double v) {
    const double r = std::round(v * 1e4) / 1e4;
    return r == 0.0 ? 0.0 : r;  // no "-0.0" on the wire
}

ordered_json point_json(const WorldPoint& p) { return ordered_json::array({round4(p.x), round4(p.y), round4(p.z)}); }

WorldPoint point_from(const json& v) {
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
        throw Error(ErrorCode::SchemaError, "expected [x, y, z]");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

}  // namespace

ControlMessage parse_control(std::string_view text) {
    auto malformed = [](const std::string& what) { throw Error(ErrorCode::MalformedControl, what); };
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error&) {
        malformed("not valid JSON");
    }
    if (!j.is_object()) malformed("expected an object");
    if (!j.contains("type") || j["type"] != "control") malformed("type must be \"control\"");

    ControlMessage msg;
    for (const auto& [key, value] : j.items()) {
        if (key == "type") continue;
        if (key == "move") {
            if (!value.is_object()) malformed("move must be an object");
            for (const auto& [mk, mv] : value.items()) {
                if (!mv.is_number()) malformed("move." + mk + " must be a number");
                if (mk == "x")
                    msg.moveX = mv.get<double>();
                else if (mk == "depth")
                    msg.moveDepth = mv.get<double>();
                else
                    malformed("unknown field move." + mk);
            }
            if ((msg.moveX && !std::isfinite(*msg.moveX)) || (msg.moveDepth && !std::isfinite(*msg.moveDepth)))
                malformed("move values must be finite");
        } else if (key == "jump" || key == "leftHand" || key == "rightHand") {
            if (!value.is_boolean()) malformed(key + " must be a boolean");
            auto& slot = key == "jump" ? msg.jump : key == "leftHand" ? msg.leftHand : msg.rightHand;
            slot = value.get<bool>();
        } else {
            malformed("unknown field " + key);
        }
    }
    return msg;
}

std::string encode_ack(const Ack& ack) {
    ordered_json j;
    j["type"] = "ack";
    j["status"] = ack.status == AckStatus::Ok ? "ok" : ack.status == AckStatus::Ignored ? "ignored" : "error";
    if (!ack.detail.empty()) j["detail"] = ack.detail;
    return j.dump();
}

std::string encode_state(const WorldState& world, std::size_t budget) {
    ordered_json j;
    j["type"] = "state";
    j["tick"] = world.tick;

    auto cloud = ordered_json::array();
    for (const auto& p : downsample(world.cloud, budget).points) cloud.push_back(point_json(p));
    j["cloud"] = std::move(cloud);

    auto particles = ordered_json::array();
    for (const auto& p : world.particles) {
        ordered_json e;
        e["position"] = point_json(p.position);
        e["kind"] = world.scene ? world.scene->palette.at(p.kind.index).kind : std::to_string(p.kind.index);
        e["lifespan"] = round4(p.lifespan);
        particles.push_back(std::move(e));
    }
    j["particles"] = std::move(particles);

    ordered_json emitters;
    emitters["head"] = world.emitters.head ? point_json(*world.emitters.head) : ordered_json(nullptr);
    emitters["hands"] = ordered_json::array();
    for (const auto& h : world.emitters.hands) emitters["hands"].push_back(point_json(h));
    j["emitters"] = std::move(emitters);

    if (world.performer) {
        const auto& p = *world.performer;
        ordered_json perf;
        perf["x"] = round4(p.x);
        perf["depth"] = round4(p.depth);
        perf["jumpPhase"] = round4(p.jumpPhase);
        perf["leftHand"] = p.leftHandRaised;
        perf["rightHand"] = p.rightHandRaised;
        j["performer"] = std::move(perf);
    }
    return j.dump();
}

Snapshot decode_state(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SchemaError, e.what());
    }
    if (!j.is_object() || j.value("type", "") != "state") throw Error(ErrorCode::SchemaError, "not a state message");
    try {
        Snapshot s;
        s.tick = j.at("tick").get<std::uint64_t>();
        for (const auto& p : j.at("cloud")) s.cloud.push_back(point_from(p));
        for (const auto& p : j.at("particles"))
            s.particles.push_back(
                {point_from(p.at("position")), p.at("kind").get<std::string>(), p.at("lifespan").get<double>()});
        const auto& em = j.at("emitters");
        if (!em.at("head").is_null()) s.head = point_from(em.at("head"));
        for (const auto& h : em.at("hands")) s.hands.push_back(point_from(h));
        if (j.contains("performer")) {
            const auto& p = j["performer"];
            s.performer = PerformerState{p.at("x").get<double>(), p.at("depth").get<double>(),
                                         p.at("jumpPhase").get<double>(), p.at("leftHand").get<bool>(),
                                         p.at("rightHand").get<bool>()};
        }
        return s;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::SchemaError, e.what());
    }
}

std::string encode_hello(const PainterlyScene& scene, const SessionConfig& cfg) {
    ordered_json j;
    j["type"] = "hello";
    j["scene"] = scene.descriptor;
    j["tickRate"] = cfg.tickRate;
    j["mode"] = std::string(to_string(cfg.source));
    ordered_json cam;
    cam["position"] = point_json(cfg.camera.position);
    cam["focalLengthPx"] = cfg.camera.focalLengthPx;
    cam["width"] = cfg.camera.imageWidth;
    cam["height"] = cfg.camera.imageHeight;
    cam["mirror"] = cfg.camera.mirror;
    j["camera"] = std::move(cam);
    return j.dump();
}

// ---------------------------------------------------------------------------

void PerformerController::apply(const ControlMessage& msg, const SynthConfig& synth) {
    if (msg.moveX) targetX = std::clamp(*msg.moveX, -synth.stageHalfWidth, synth.stageHalfWidth);
    if (msg.moveDepth)
        targetDepth = std::clamp(*msg.moveDepth, kMinPerformerDepth,
                                 std::min(kMaxPerformerDepth, double(synth.backgroundDepth) - 1.0));
    if (msg.jump.value_or(false) && !jumpElapsed) jumpElapsed = 0.0;
    if (msg.leftHand) state.leftHandRaised = *msg.leftHand;
    if (msg.rightHand) state.rightHandRaised = *msg.rightHand;
}

void PerformerController::advance(double dt) {
    auto slew = [](double current, double target, double maxStep) {
        return current + std::clamp(target - current, -maxStep, maxStep);
    };
    state.x = slew(state.x, targetX, kMaxSlewMetersPerSecond * dt);
    state.depth = slew(state.depth, targetDepth, kMaxSlewMetersPerSecond * 1000.0 * dt);
    if (jumpElapsed) {
        *jumpElapsed += dt;
        if (*jumpElapsed >= kJumpDuration) {
            jumpElapsed.reset();
            state.jumpPhase = 0.0;
        } else {
            state.jumpPhase = std::sin(std::numbers::pi * *jumpElapsed / kJumpDuration);
        }
    }
}

// ---------------------------------------------------------------------------

namespace {

std::shared_ptr<const PainterlyScene> load_checked(const SessionConfig& cfg) {
    cfg.validate();
    return std::make_shared<const PainterlyScene>(load_scene(cfg.scenePath));
}

}  // namespace

Session::Session(SessionConfig cfg) : Session(cfg, load_checked(cfg)) {}

Session::Session(SessionConfig cfg, std::shared_ptr<const PainterlyScene> scene)
    : cfg_(std::move(cfg)), scene_(std::move(scene)) {
    cfg_.validate();
    if (cfg_.source == SourceMode::Recording) recording_ = open_recording(cfg_.recordingPath);
    performer_.targetDepth = performer_.state.depth;
    particles_ = ParticleSystemState::initial(cfg_.physics, cfg_.seed);
    latest_ = std::make_shared<const WorldState>(compose(scene_, {}, {}, {}, 0));
}

std::uint32_t Session::recording_frame_for_tick(std::uint64_t tick) const {
    if (!recording_ || tick == 0) return 0;
    // Small epsilon so that exact ratios (30 fps / 60 Hz) never round down early.
    const double t = double(tick - 1) / cfg_.tickRate;
    const auto index = static_cast<std::uint64_t>(std::floor(t * recording_->fps() + 1e-9));
    return static_cast<std::uint32_t>(index % recording_->frame_count());
}

DepthFrame Session::acquire(std::uint64_t tick) {
    if (recording_) return recording_->frame(recording_frame_for_tick(tick));
    return synth_frame(performer_.state, cfg_.synth, double(tick - 1) / cfg_.tickRate);
}

std::shared_ptr<const WorldState> Session::step() {
    const std::uint64_t next = tick_ + 1;
    {
        std::vector<ControlMessage> pending;
        {
            std::lock_guard lock(inboxMutex_);
            pending.swap(inbox_);
        }
        for (auto& msg : pending) {
            performer_.apply(msg, cfg_.synth);
            controlLog_.push_back({next, std::move(msg)});
        }
    }
    if (cfg_.source == SourceMode::Synthetic) performer_.advance(1.0 / cfg_.tickRate);

    DepthFrame frame;
    {
        ScopedTimer t(timings_, "ingest");
        frame = acquire(next);
    }
    ImageCloud image;
    {
        ScopedTimer t(timings_, "extract");
        image = extract_point_cloud(frame, cfg_.filter);
    }
    WorldCloud world;
    {
        ScopedTimer t(timings_, "map");
        world = map_cloud(image, cfg_.mapping, scene_->bounds);
    }
    EmitterSet emitters;
    WorldCloud budgeted;
    {
        ScopedTimer t(timings_, "detect");
        emitters = detect_emitters(world, cfg_.emitterDetection);
        budgeted = downsample(world, cfg_.snapshotPointBudget);
    }
    {
        ScopedTimer t(timings_, "particles");
        std::vector<WorldPoint> sources;
        if (cfg_.physics.emitterSource == EmitterSource::WholeCloud || emitters.fallbackAll) {
            sources = budgeted.points;
        } else {
            if (emitters.head) sources.push_back(*emitters.head);
            sources.insert(sources.end(), emitters.hands.begin(), emitters.hands.end());
        }
        totalSpawned_ += painterly::step(particles_, sources, scene_->groundY, cfg_.physics, scene_->palette);
    }
    {
        ScopedTimer t(timings_, "compose");
        auto composed = compose(scene_, budgeted, particles_.particles, emitters, next);
        if (cfg_.source == SourceMode::Synthetic) composed.performer = performer_.state;
        latest_ = std::make_shared<const WorldState>(std::move(composed));
    }
    tick_ = next;
    return latest_;
}

Ack Session::submit_control(std::string_view text) {
    ControlMessage msg;
    try {
        msg = parse_control(text);
    } catch (const Error& e) {
        return {AckStatus::Error, e.what()};
    }
    if (cfg_.source != SourceMode::Synthetic) return {AckStatus::Ignored, {}};
    std::lock_guard lock(inboxMutex_);
    inbox_.push_back(std::move(msg));
    return {AckStatus::Ok, {}};
}

std::string Session::state_hash() const {
    StateHasher h;
    h.u64(tick_);
    h.u64(particles_.particles.size());
    for (const auto& p : particles_.particles) {
        for (double v : {p.position.x, p.position.y, p.position.z, p.velocity.x, p.velocity.y, p.velocity.z, p.lifespan})
            h.f64(v);
        h.u64(p.kind.index);
    }
    h.u64(std::uint64_t(particles_.buffer));
    h.str(particles_.rng.serialize());
    const auto& perf = performer_.state;
    for (double v : {perf.x, perf.depth, perf.jumpPhase}) h.f64(v);
    h.u64((perf.leftHandRaised ? 1u : 0u) | (perf.rightHandRaised ? 2u : 0u));
    if (latest_) {
        h.u64(latest_->cloud.size());
        for (const auto& p : latest_->cloud.points) {
            h.f64(p.x);
            h.f64(p.y);
            h.f64(p.z);
        }
        h.u64(latest_->emitters.head ? 1 : 0);
        if (latest_->emitters.head) {
            h.f64(latest_->emitters.head->x);
            h.f64(latest_->emitters.head->y);
            h.f64(latest_->emitters.head->z);
        }
        h.u64(latest_->emitters.hands.size());
        for (const auto& p : latest_->emitters.hands) {
            h.f64(p.x);
            h.f64(p.y);
            h.f64(p.z);
        }
    }
    return h.hex();
}

}  // namespace painterly
