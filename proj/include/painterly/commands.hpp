#pragma once

#include "painterly/config.hpp"
#include "painterly/session.hpp"

#include <map>

#include <filesystem>
#include <optional>
#include <string>

namespace painterly {

struct ReplayResult {
    std::uint64_t ticks = 0;
    std::string finalStateHash;
    std::size_t framesWritten = 0;
};

/// Headless, as-fast-as-possible run over a recording. Writes
/// frame_NNNNNN.ppm per tick, final_state_hash.txt and metrics.json to `outDir`.
/// Default tick count covers one pass of the recording.
ReplayResult run_replay(SessionConfig cfg, const std::filesystem::path& outDir, std::optional<std::uint64_t> ticks);

/// Ticks needed to play every recorded frame once at the session tick rate.
std::uint64_t ticks_for_one_pass(const SessionConfig& cfg);

/// Script: {"fps": 30, "frames": 90, "synth": {...}?, "keyframes": [{"t", "x",
/// "depth", "jump", "leftHand", "rightHand"}...]}. x/depth/jump interpolate
/// linearly between keyframes; hand flags hold from the previous keyframe.
void synth_record(const std::filesystem::path& script, const std::filesystem::path& out);

/// Scene-only render (no embodiment, no particles).
Image render_scene_only(const std::filesystem::path& scenePath, const Camera& cam, const RenderStyle& style = {});

struct BenchReport {
    std::uint64_t ticks = 0;
    std::map<std::string, StageSummary> stages;  // includes "render" and "total"
    int threads = 1;

    nlohmann::ordered_json to_json() const;
};

/// Full per-tick pipeline including render; timings per stage.
BenchReport run_bench(SessionConfig cfg, std::optional<std::uint64_t> ticks);

}  // namespace painterly
