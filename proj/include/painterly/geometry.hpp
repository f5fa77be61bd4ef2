#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>

namespace painterly {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) noexcept { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) noexcept { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator*(Vec3 a, double s) noexcept { return {a.x * s, a.y * s, a.z * s}; }
    friend constexpr bool operator==(Vec3 a, Vec3 b) noexcept = default;
};

/// World-space position in meters: x right, y up, z into the scene.
using WorldPoint = Vec3;

constexpr double dot(Vec3 a, Vec3 b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(Vec3 a, Vec3 b) noexcept {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double length(Vec3 v) noexcept { return std::sqrt(dot(v, v)); }

struct Aabb {
    Vec3 min;
    Vec3 max;

    constexpr bool contains(Vec3 p) const noexcept {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z &&
               p.z <= max.z;
    }

    constexpr Vec3 clamp(Vec3 p) const noexcept {
        return {std::clamp(p.x, min.x, max.x), std::clamp(p.y, min.y, max.y),
                std::clamp(p.z, min.z, max.z)};
    }
};

/// Index into the active scene's painterly-object palette.
struct ObjectKind {
    std::uint32_t index = 0;

    friend constexpr bool operator==(ObjectKind, ObjectKind) noexcept = default;
};

struct PaletteEntry {
    std::string kind;
    std::string sprite;
    double size = 0.0;  // nominal billboard edge, meters
};

}  // namespace painterly
