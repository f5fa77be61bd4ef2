#pragma once

#include "painterly/geometry.hpp"
#include "painterly/image.hpp"
#include "painterly/scene.hpp"

#include <optional>

namespace painterly {

/// Pinhole camera looking down +z with no rotation.
struct Camera {
    WorldPoint position{0.0, 1.2, -2.5};
    double focalLengthPx = 700.0;
    std::uint32_t imageWidth = 960;
    std::uint32_t imageHeight = 540;
    bool mirror = true;

    bool valid() const noexcept { return focalLengthPx > 0.0 && imageWidth > 0 && imageHeight > 0; }
    double cx() const noexcept { return imageWidth / 2.0; }
    double cy() const noexcept { return imageHeight / 2.0; }
};

inline constexpr double kNearPlane = 0.01;

struct Projection {
    double u = 0.0;  // pixel-edge coordinates: column i spans [i, i + 1)
    double v = 0.0;
    double depth = 0.0;
};

/// std::nullopt when the point is at or behind the near plane.
std::optional<Projection> project(const WorldPoint& p, const Camera& cam);

struct RenderStyle {
    double splatRadiusPx = 2.0;
    Rgb splatColor{18, 16, 20};
    Rgb background{232, 222, 200};
};

/// Sprite pixels of this colour are transparent.
inline constexpr Rgb kSpriteKey{255, 0, 255};

/// Painter's algorithm: facades farthest first, then billboards and point
/// splats interleaved by depth. Mirroring is a horizontal flip of the
/// unmirrored composite, so the two are exact reflections of each other.
Image render_frame(const WorldState& world, const Camera& cam, const RenderStyle& style = {});

}  // namespace painterly
