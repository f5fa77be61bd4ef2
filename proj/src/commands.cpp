#include "painterly/commands.hpp"

#include "painterly/error.hpp"
#include "painterly/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace painterly {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::uint64_t ticks_for_one_pass(const SessionConfig& cfg) {
    const auto stream = open_recording(cfg.recordingPath);
    return static_cast<std::uint64_t>(std::ceil(stream.frame_count() * cfg.tickRate / stream.fps() - 1e-9));
}

namespace {

ordered_json stage_json(const StageSummary& s) {
    ordered_json j;
    j["mean_ms"] = s.meanMs;
    j["median_ms"] = s.medianMs;
    j["p99_ms"] = s.p99Ms;
    j["samples"] = s.samples;
    return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace

ReplayResult run_replay(SessionConfig cfg, const std::filesystem::path& outDir, std::optional<std::uint64_t> ticks) {
    cfg.source = SourceMode::Recording;
    Session session(cfg);
    const std::uint64_t total = ticks.value_or(ticks_for_one_pass(cfg));

    std::error_code ec;
    std::filesystem::create_directories(outDir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + outDir.string());

    ReplayResult result;
    std::size_t maxParticles = 0, maxCloud = 0;
    for (std::uint64_t i = 0; i < total; ++i) {
        const auto world = session.step();
        Image frame;
        {
            ScopedTimer t(session.timings(), "render");
            frame = render_frame(*world, cfg.camera, cfg.style);
        }
        {
            ScopedTimer t(session.timings(), "encode");
            (void)encode_state(*world, cfg.snapshotPointBudget);
        }
        char name[32];
        std::snprintf(name, sizeof name, "frame_%06llu.ppm", static_cast<unsigned long long>(world->tick));
        write_image(frame, outDir / name, ImageFormat::Ppm);
        ++result.framesWritten;
        maxParticles = std::max(maxParticles, world->particles.size());
        maxCloud = std::max(maxCloud, world->cloud.size());
    }
    result.ticks = session.tick();
    result.finalStateHash = session.state_hash();

    ordered_json metrics;
    metrics["ticks"] = result.ticks;
    metrics["seed"] = cfg.seed;
    metrics["finalStateHash"] = result.finalStateHash;
    ordered_json stages;
    for (const auto& s : session.timings().stages()) stages[s] = stage_json(session.timings().summary(s));
    metrics["stages"] = std::move(stages);
    metrics["particles"] = {{"max", maxParticles},
                            {"final", session.particle_state().particles.size()},
                            {"spawned", session.total_spawned()}};
    metrics["cloudPoints"] = {{"max", maxCloud}};
    write_text(outDir / "final_state_hash.txt", result.finalStateHash + "\n");
    write_text(outDir / "metrics.json", metrics.dump(2) + "\n");
    return result;
}

// ---------------------------------------------------------------------------

namespace {

struct Keyframe {
    double t = 0.0;
    double x = 0.0;
    double depth = 2000.0;
    double jump = 0.0;
    bool leftHand = false;
    bool rightHand = false;
};

PerformerState sample_script(const std::vector<Keyframe>& keys, double t) {
    auto to_state = [](const Keyframe& k) { return PerformerState{k.x, k.depth, k.jump, k.leftHand, k.rightHand}; };
    if (t <= keys.front().t) return to_state(keys.front());
    for (std::size_t i = 1; i < keys.size(); ++i) {
        const auto& a = keys[i - 1];
        const auto& b = keys[i];
        if (t < b.t) {
            const double f = (t - a.t) / (b.t - a.t);
            return {a.x + f * (b.x - a.x), a.depth + f * (b.depth - a.depth), a.jump + f * (b.jump - a.jump),
                    a.leftHand, a.rightHand};
        }
    }
    return to_state(keys.back());
}

}  // namespace

void synth_record(const std::filesystem::path& script, const std::filesystem::path& out) {
    std::ifstream in(script);
    if (!in) throw Error(ErrorCode::MissingFile, script.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::BadConfig, script.string() + ": " + e.what());
    }

    SessionConfig base;
    if (j.contains("synth")) base = session_config_from_json(json{{"synth", j["synth"]}}, script.parent_path());
    const auto& synth = base.synth;

    const double fps = j.value("fps", 30.0);
    const auto frames = j.value("frames", 0u);
    if (!(fps > 0.0) || frames == 0) throw Error(ErrorCode::BadConfig, "script needs fps > 0 and frames > 0");

    std::vector<Keyframe> keys;
    for (const auto& k : j.at("keyframes")) {
        keys.push_back({k.value("t", 0.0), k.value("x", 0.0), k.value("depth", 2000.0), k.value("jump", 0.0),
                        k.value("leftHand", false), k.value("rightHand", false)});
    }
    if (keys.empty()) throw Error(ErrorCode::BadConfig, "script needs at least one keyframe");
    for (std::size_t i = 1; i < keys.size(); ++i)
        if (!(keys[i].t > keys[i - 1].t)) throw Error(ErrorCode::BadConfig, "keyframe times must increase");

    std::vector<DepthFrame> out_frames;
    out_frames.reserve(frames);
    for (std::uint32_t k = 0; k < frames; ++k) {
        const double t = k / fps;
        const auto performer = sample_script(keys, t);
        if (!performer_valid(performer, synth))
            throw Error(ErrorCode::BadConfig, "scripted performer leaves the stage at t=" + std::to_string(t));
        out_frames.push_back(synth_frame(performer, synth, t));
    }
    write_recording(out, {synth.frameWidth, synth.frameHeight, frames, fps}, out_frames);
}

Image render_scene_only(const std::filesystem::path& scenePath, const Camera& cam, const RenderStyle& style) {
    auto scene = std::make_shared<const PainterlyScene>(load_scene(scenePath));
    return render_frame(compose(scene, {}, {}, {}, 0), cam, style);
}

// ---------------------------------------------------------------------------

ordered_json BenchReport::to_json() const {
    ordered_json j;
    j["ticks"] = ticks;
    j["threads"] = threads;
    ordered_json s;
    for (const auto& [name, summary] : stages) s[name] = stage_json(summary);
    j["stages"] = std::move(s);
    return j;
}

BenchReport run_bench(SessionConfig cfg, std::optional<std::uint64_t> ticks) {
    cfg.source = SourceMode::Recording;
    Session session(cfg);
    const std::uint64_t total = ticks.value_or(std::max<std::uint64_t>(ticks_for_one_pass(cfg), 300));

    std::vector<double> totals;
    totals.reserve(total);
    for (std::uint64_t i = 0; i < total; ++i) {
        const auto start = std::chrono::steady_clock::now();
        const auto world = session.step();
        {
            ScopedTimer t(session.timings(), "render");
            const auto frame = render_frame(*world, cfg.camera, cfg.style);
            (void)frame;
        }
        {
            ScopedTimer t(session.timings(), "encode");
            (void)encode_state(*world, cfg.snapshotPointBudget);
        }
        totals.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
    }

    BenchReport report;
    report.ticks = total;
    report.threads = kernels::thread_count();
    for (const auto& s : session.timings().stages()) report.stages[s] = session.timings().summary(s);
    report.stages["total"] = summarize(totals);
    return report;
}

}  // namespace painterly
