#include "painterly/scene.hpp"

#include "painterly/error.hpp"

#include <fstream>
#include <set>

namespace painterly {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::SchemaError, field + ": " + what);
}

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::ValidationError, field + ": " + what);
}

void expect_keys(const json& obj, const std::string& field, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) schema(field, "expected an object");
    std::set<std::string> allowed;
    for (auto k : keys) {
        allowed.insert(k);
        if (!obj.contains(k)) schema(field + "." + k, "missing required field");
    }
    for (const auto& [k, _] : obj.items())
        if (!allowed.count(k)) schema(field + "." + k, "unknown field");
}

double number(const json& v, const std::string& field) {
    if (!v.is_number()) schema(field, "expected a number");
    return v.get<double>();
}

std::string string(const json& v, const std::string& field) {
    if (!v.is_string()) schema(field, "expected a string");
    return v.get<std::string>();
}

const json& array(const json& v, const std::string& field) {
    if (!v.is_array()) schema(field, "expected an array");
    return v;
}

Vec3 vec3(const json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 3) schema(field, "expected [x, y, z]");
    return {number(v[0], field + "[0]"), number(v[1], field + "[1]"), number(v[2], field + "[2]")};
}

Image load_asset(const std::filesystem::path& root, const std::string& rel, const std::string& field) {
    const auto path = root / rel;
    if (!std::filesystem::is_regular_file(path)) throw Error(ErrorCode::MissingAsset, field + ": " + path.string());
    try {
        return read_ppm(path);
    } catch (const Error& e) {
        throw Error(ErrorCode::MissingAsset, field + ": unreadable image (" + e.what() + ")");
    }
}

}  // namespace

std::optional<ObjectKind> PainterlyScene::find_kind(std::string_view id) const {
    for (std::size_t i = 0; i < palette.size(); ++i)
        if (palette[i].kind == id) return ObjectKind{static_cast<std::uint32_t>(i)};
    return std::nullopt;
}

PainterlyScene parse_scene(const json& d, const std::filesystem::path& assetRoot) {
    expect_keys(d, "scene", {"facades", "objects", "palette", "groundY", "bounds"});

    PainterlyScene scene;
    scene.descriptor = d;

    expect_keys(d["bounds"], "bounds", {"min", "max"});
    scene.bounds = {vec3(d["bounds"]["min"], "bounds.min"), vec3(d["bounds"]["max"], "bounds.max")};
    if (!(scene.bounds.min.x < scene.bounds.max.x && scene.bounds.min.y < scene.bounds.max.y &&
          scene.bounds.min.z < scene.bounds.max.z))
        invalid("bounds", "min must be strictly below max on every axis");

    scene.groundY = number(d["groundY"], "groundY");
    if (scene.groundY < scene.bounds.min.y || scene.groundY > scene.bounds.max.y)
        invalid("groundY", "outside bounds");

    const auto& palette = array(d["palette"], "palette");
    if (palette.empty()) invalid("palette", "must not be empty");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < palette.size(); ++i) {
        const auto field = "palette[" + std::to_string(i) + "]";
        expect_keys(palette[i], field, {"kind", "sprite", "size"});
        PaletteEntry entry{string(palette[i]["kind"], field + ".kind"), string(palette[i]["sprite"], field + ".sprite"),
                           number(palette[i]["size"], field + ".size")};
        if (!seen.insert(entry.kind).second) invalid(field + ".kind", "duplicate kind id '" + entry.kind + "'");
        if (!(entry.size > 0.0)) invalid(field + ".size", "must be positive");
        scene.sprites.push_back(load_asset(assetRoot, entry.sprite, field + ".sprite"));
        scene.palette.push_back(std::move(entry));
    }

    const auto& facades = array(d["facades"], "facades");
    if (facades.size() != 3) invalid("facades", "exactly 3 facades required, got " + std::to_string(facades.size()));
    for (std::size_t i = 0; i < 3; ++i) {
        const auto field = "facades[" + std::to_string(i) + "]";
        expect_keys(facades[i], field, {"name", "texture", "corners"});
        auto& f = scene.facades[i];
        f.name = string(facades[i]["name"], field + ".name");
        f.texturePath = string(facades[i]["texture"], field + ".texture");
        const auto& corners = array(facades[i]["corners"], field + ".corners");
        if (corners.size() != 4) invalid(field + ".corners", "exactly 4 corners required");
        for (std::size_t c = 0; c < 4; ++c)
            f.corners[c] = vec3(corners[c], field + ".corners[" + std::to_string(c) + "]");

        const Vec3 n = cross(f.corners[1] - f.corners[0], f.corners[3] - f.corners[0]);
        const double nl = length(n);
        if (!(nl > 0.0)) invalid(field + ".corners", "degenerate quad");
        if (std::abs(dot(f.corners[2] - f.corners[0], n)) / nl > kPlanarityTolerance)
            invalid(field + ".corners", "quad is not planar");
        f.texture = load_asset(assetRoot, f.texturePath, field + ".texture");
    }

    const auto& objects = array(d["objects"], "objects");
    for (std::size_t i = 0; i < objects.size(); ++i) {
        const auto field = "objects[" + std::to_string(i) + "]";
        expect_keys(objects[i], field, {"kind", "position", "scale"});
        const auto kindId = string(objects[i]["kind"], field + ".kind");
        const auto kind = scene.find_kind(kindId);
        if (!kind) invalid(field + ".kind", "'" + kindId + "' is not in the palette");
        PlacedObject obj{*kind, vec3(objects[i]["position"], field + ".position"),
                         number(objects[i]["scale"], field + ".scale")};
        if (!scene.bounds.contains(obj.position)) invalid(field + ".position", "outside bounds");
        if (!(obj.scale > 0.0)) invalid(field + ".scale", "must be positive");
        scene.placedObjects.push_back(obj);
    }
    return scene;
}

PainterlyScene load_scene(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MissingFile, path.string());
    json d;
    try {
        d = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SchemaError, path.string() + ": " + e.what());
    }
    return parse_scene(d, path.parent_path());
}

WorldPoint clamp_to_bounds(const WorldPoint& p, const PainterlyScene& scene) { return scene.bounds.clamp(p); }

WorldState compose(std::shared_ptr<const PainterlyScene> scene, const WorldCloud& cloud,
                   std::span<const Particle> particles, const EmitterSet& emitters, std::uint64_t tick) {
    WorldState w;
    w.tick = tick;
    w.cloud.source = cloud.source;
    w.cloud.points.reserve(cloud.size());
    for (const auto& p : cloud.points) w.cloud.points.push_back(clamp_to_bounds(p, *scene));
    w.particles.assign(particles.begin(), particles.end());
    w.emitters = emitters;
    w.scene = std::move(scene);
    return w;
}

}  // namespace painterly
