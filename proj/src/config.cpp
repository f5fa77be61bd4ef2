#include "painterly/config.hpp"

#include "painterly/error.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>

namespace painterly {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::BadConfig, field + ": " + what);
}

using Handlers = std::map<std::string, std::function<void(const json&, const std::string&)>>;

void visit(const json& obj, const std::string& field, const Handlers& handlers) {
    if (!obj.is_object()) bad(field, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        const auto it = handlers.find(key);
        const auto path = field.empty() ? key : field + "." + key;
        if (it == handlers.end()) bad(path, "unknown key");
        it->second(value, path);
    }
}

template <typename T>
auto num(T& slot) {
    return [&slot](const json& v, const std::string& path) {
        if (!v.is_number()) bad(path, "expected a number");
        if constexpr (std::is_unsigned_v<T>) {
            if (!v.is_number_unsigned()) bad(path, "expected a non-negative integer");
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) bad(path, "expected an integer");
        }
        slot = v.get<T>();
    };
}

auto flag(bool& slot) {
    return [&slot](const json& v, const std::string& path) {
        if (!v.is_boolean()) bad(path, "expected a boolean");
        slot = v.get<bool>();
    };
}

auto vec3(Vec3& slot) {
    return [&slot](const json& v, const std::string& path) {
        if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
            bad(path, "expected [x, y, z]");
        slot = {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    };
}

auto rgb(Rgb& slot) {
    return [&slot](const json& v, const std::string& path) {
        if (!v.is_array() || v.size() != 3) bad(path, "expected [r, g, b]");
        std::uint8_t c[3];
        for (int i = 0; i < 3; ++i) {
            if (!v[i].is_number_unsigned() || v[i].get<unsigned>() > 255) bad(path, "channel must be 0..255");
            c[i] = static_cast<std::uint8_t>(v[i].get<unsigned>());
        }
        slot = {c[0], c[1], c[2]};
    };
}

auto path_of(std::filesystem::path& slot, const std::filesystem::path& base) {
    return [&slot, base](const json& v, const std::string& path) {
        if (!v.is_string()) bad(path, "expected a path string");
        const std::filesystem::path p = v.get<std::string>();
        slot = p.is_absolute() ? p : base / p;
    };
}

}  // namespace

std::uint64_t parse_seed(std::string_view text) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw Error(ErrorCode::BadConfig, "seed must be a u64 decimal, got '" + std::string(text) + "'");
    return value;
}

std::pair<std::string, unsigned short> split_listen_address(const std::string& address) {
    const auto colon = address.rfind(':');
    if (colon == std::string::npos || colon == 0) throw Error(ErrorCode::BadConfig, "listen address must be host:port");
    unsigned port = 0;
    const auto digits = std::string_view(address).substr(colon + 1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
    if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() || port > 65535)
        throw Error(ErrorCode::BadConfig, "bad port in listen address '" + address + "'");
    return {address.substr(0, colon), static_cast<unsigned short>(port)};
}

SessionConfig session_config_from_json(const json& j, const std::filesystem::path& baseDir, SessionConfig cfg) {
    bool dtGiven = false;
    Handlers filter{{"depthThreshold", num(cfg.filter.depthThreshold)},
                    {"epsilon", num(cfg.filter.epsilon)},
                    {"stride", num(cfg.filter.stride)}};
    Handlers mapping{{"pixelsPerMeterX", num(cfg.mapping.pixelsPerMeterX)},
                     {"pixelsPerMeterY", num(cfg.mapping.pixelsPerMeterY)},
                     {"depthToZ", num(cfg.mapping.depthToZ)},
                     {"originOffset", vec3(cfg.mapping.originOffset)},
                     {"mirrorX", flag(cfg.mapping.mirrorX)}};
    Handlers physics{{"particleNum", num(cfg.physics.particleNum)},
                     {"bufferInit", num(cfg.physics.bufferInit)},
                     {"launchSpeed", num(cfg.physics.launchSpeed)},
                     {"horizontalJitter", num(cfg.physics.horizontalJitter)},
                     {"gravity", num(cfg.physics.gravity)},
                     {"restitution", num(cfg.physics.restitution)},
                     {"lifespanInit", num(cfg.physics.lifespanInit)},
                     {"dt",
                      [&](const json& v, const std::string& p) {
                          num(cfg.physics.dt)(v, p);
                          dtGiven = true;
                      }},
                     {"emitterSource", [&](const json& v, const std::string& p) {
                          if (v == "emitters")
                              cfg.physics.emitterSource = EmitterSource::Emitters;
                          else if (v == "wholeCloud")
                              cfg.physics.emitterSource = EmitterSource::WholeCloud;
                          else
                              bad(p, "expected \"emitters\" or \"wholeCloud\"");
                      }}};
    Handlers detection{{"capFraction", num(cfg.emitterDetection.capFraction)},
                       {"handHeightFraction", num(cfg.emitterDetection.handHeightFraction)},
                       {"gapThreshold", num(cfg.emitterDetection.gapThreshold)}};
    Handlers synth{{"frameWidth", num(cfg.synth.frameWidth)},       {"frameHeight", num(cfg.synth.frameHeight)},
                   {"bodyHeightPx", num(cfg.synth.bodyHeightPx)},   {"bodyWidthPx", num(cfg.synth.bodyWidthPx)},
                   {"headRadiusPx", num(cfg.synth.headRadiusPx)},   {"armLengthPx", num(cfg.synth.armLengthPx)},
                   {"armWidthPx", num(cfg.synth.armWidthPx)},       {"floorMarginPx", num(cfg.synth.floorMarginPx)},
                   {"jumpHeightPx", num(cfg.synth.jumpHeightPx)},   {"pixelsPerMeter", num(cfg.synth.pixelsPerMeter)},
                   {"stageHalfWidth", num(cfg.synth.stageHalfWidth)}, {"backgroundDepth", num(cfg.synth.backgroundDepth)}};
    Handlers camera{{"position", vec3(cfg.camera.position)},
                    {"focalLengthPx", num(cfg.camera.focalLengthPx)},
                    {"imageWidth", num(cfg.camera.imageWidth)},
                    {"imageHeight", num(cfg.camera.imageHeight)},
                    {"mirror", flag(cfg.camera.mirror)}};
    Handlers style{{"splatRadiusPx", num(cfg.style.splatRadiusPx)},
                   {"splatColor", rgb(cfg.style.splatColor)},
                   {"background", rgb(cfg.style.background)}};

    Handlers top{
        {"source",
         [&](const json& v, const std::string& p) {
             if (v == "synthetic")
                 cfg.source = SourceMode::Synthetic;
             else if (v == "recording")
                 cfg.source = SourceMode::Recording;
             else
                 bad(p, "expected \"synthetic\" or \"recording\"");
         }},
        {"recording", path_of(cfg.recordingPath, baseDir)},
        {"seed",
         [&](const json& v, const std::string& p) {
             if (v.is_number_unsigned())
                 cfg.seed = v.get<std::uint64_t>();
             else if (v.is_string())
                 cfg.seed = parse_seed(v.get<std::string>());
             else
                 bad(p, "expected a u64");
         }},
        {"tickRate", num(cfg.tickRate)},
        {"filter", [&](const json& v, const std::string& p) { visit(v, p, filter); }},
        {"mapping", [&](const json& v, const std::string& p) { visit(v, p, mapping); }},
        {"physics", [&](const json& v, const std::string& p) { visit(v, p, physics); }},
        {"emitterDetection", [&](const json& v, const std::string& p) { visit(v, p, detection); }},
        {"synth", [&](const json& v, const std::string& p) { visit(v, p, synth); }},
        {"camera", [&](const json& v, const std::string& p) { visit(v, p, camera); }},
        {"style", [&](const json& v, const std::string& p) { visit(v, p, style); }},
        {"scenePath", path_of(cfg.scenePath, baseDir)},
        {"listenAddress",
         [&](const json& v, const std::string& p) {
             if (!v.is_string()) bad(p, "expected host:port");
             cfg.listenAddress = v.get<std::string>();
         }},
        {"snapshotPointBudget", num(cfg.snapshotPointBudget)},
        {"webRoot", path_of(cfg.webRoot, baseDir)},
    };
    visit(j, "", top);
    // The fixed timestep follows the tick rate unless pinned explicitly.
    if (!dtGiven && j.contains("tickRate") && cfg.tickRate > 0.0) cfg.physics.dt = 1.0 / cfg.tickRate;
    return cfg;
}

SessionConfig load_session_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MissingFile, path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::BadConfig, path.string() + ": " + e.what());
    }
    return session_config_from_json(j, path.parent_path());
}

}  // namespace painterly
