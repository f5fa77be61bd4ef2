#pragma once

#include "painterly/depth.hpp"
#include "painterly/embodiment.hpp"
#include "painterly/geometry.hpp"
#include "painterly/image.hpp"
#include "painterly/particles.hpp"

#include "json.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace painterly {

/// Textured quad; corners run (0,0) (1,0) (1,1) (0,1) in texture space, where
/// texture v = 0 is the top row of the image.
struct Facade {
    std::string name;
    std::string texturePath;
    std::array<WorldPoint, 4> corners;
    Image texture;

    double mean_z() const noexcept {
        return (corners[0].z + corners[1].z + corners[2].z + corners[3].z) / 4.0;
    }
};

/// Static decor; `scale` is the billboard edge length in meters.
struct PlacedObject {
    ObjectKind kind;
    WorldPoint position;
    double scale = 1.0;
};

inline constexpr double kPlanarityTolerance = 1e-6;

struct PainterlyScene {
    std::array<Facade, 3> facades;  // back, left, right
    std::vector<PlacedObject> placedObjects;
    std::vector<PaletteEntry> palette;
    std::vector<Image> sprites;  // parallel to palette
    double groundY = 0.0;
    Aabb bounds;
    nlohmann::json descriptor;  // echoed to viewers in the hello message

    /// Index of a palette kind id, if present.
    std::optional<ObjectKind> find_kind(std::string_view id) const;
};

/// Parses and validates a descriptor; asset paths resolve against `assetRoot`.
/// Throws Error{SchemaError | ValidationError | MissingAsset}.
PainterlyScene parse_scene(const nlohmann::json& descriptor, const std::filesystem::path& assetRoot);

/// Also throws Error{MissingFile} and SchemaError for unparseable JSON.
PainterlyScene load_scene(const std::filesystem::path& path);

WorldPoint clamp_to_bounds(const WorldPoint& p, const PainterlyScene& scene);

/// Everything one tick produced, assembled for rendering and streaming.
struct WorldState {
    std::uint64_t tick = 0;
    WorldCloud cloud;  // world space, clamped, downsampled
    std::vector<Particle> particles;
    EmitterSet emitters;
    std::shared_ptr<const PainterlyScene> scene;
    std::optional<PerformerState> performer;  // synthetic sessions only
};

/// Pure assembly; cloud points are clamped into the scene bounds.
WorldState compose(std::shared_ptr<const PainterlyScene> scene, const WorldCloud& cloud,
                   std::span<const Particle> particles, const EmitterSet& emitters, std::uint64_t tick);

}  // namespace painterly
