#pragma once

#include "painterly/depth.hpp"
#include "painterly/geometry.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace painterly {

/// Depth-band filter: keep d with depthThreshold - epsilon <= d <= depthThreshold + epsilon.
struct FilterConfig {
    double depthThreshold = 2000.0;  // mm
    double epsilon = 500.0;          // mm
    std::uint32_t stride = 1;        // pixel subsampling step on both axes

    bool valid() const noexcept { return epsilon >= 0.0 && depthThreshold > 0.0 && stride >= 1; }

    /// Band membership; 0 is the "no reading" sentinel and never passes.
    constexpr bool accepts(std::uint16_t d) const noexcept {
        return d != 0 && d >= depthThreshold - epsilon && d <= depthThreshold + epsilon;
    }
};

struct ImagePoint {
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    std::uint16_t depth = 0;

    friend constexpr bool operator==(ImagePoint, ImagePoint) noexcept = default;
};

struct FrameInfo {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    double timestamp = 0.0;
};

template <typename Point>
struct PointCloud {
    std::vector<Point> points;
    FrameInfo source;

    std::size_t size() const noexcept { return points.size(); }
    bool empty() const noexcept { return points.empty(); }
};

using ImageCloud = PointCloud<ImagePoint>;
using WorldCloud = PointCloud<WorldPoint>;

/// Affine image-to-world map. No pinhole intrinsics: the mirror presents the
/// body at life scale, which a per-axis scale achieves directly.
struct MappingConfig {
    double pixelsPerMeterX = 200.0;
    double pixelsPerMeterY = 200.0;
    double depthToZ = 0.001;  // meters per millimeter
    WorldPoint originOffset{0.0, -0.1, -0.5};
    bool mirrorX = false;

    bool valid() const noexcept { return pixelsPerMeterX > 0.0 && pixelsPerMeterY > 0.0 && depthToZ > 0.0; }
};

struct EmitterParams {
    double capFraction = 0.15;
    double handHeightFraction = 0.8;
    double gapThreshold = 0.25;  // meters
};

struct EmitterSet {
    std::optional<WorldPoint> head;
    std::vector<WorldPoint> hands;  // at most two
    bool fallbackAll = false;       // detection failed; the whole cloud emits

    bool empty() const noexcept { return !head && hands.empty(); }
};

/// Row-major scan of the frame at cfg.stride keeping band members.
ImageCloud extract_point_cloud(const DepthFrame& frame, const FilterConfig& cfg);

WorldPoint to_world(const ImagePoint& p, const FrameInfo& dims, const MappingConfig& map);

/// Analytic inverse of to_world, rounded back onto the integer pixel grid.
ImagePoint to_image(const WorldPoint& w, const FrameInfo& dims, const MappingConfig& map);

/// Maps every point and clamps it into `bounds`.
WorldCloud map_cloud(const ImageCloud& cloud, const MappingConfig& map, const Aabb& bounds);

EmitterSet detect_emitters(const WorldCloud& cloud, const EmitterParams& params = {});

/// Keeps every ceil(n / targetMax)-th point; identity when n <= targetMax.
template <typename Point>
PointCloud<Point> downsample(const PointCloud<Point>& cloud, std::size_t targetMax) {
    if (targetMax == 0) targetMax = 1;
    if (cloud.size() <= targetMax) return cloud;
    const std::size_t step = (cloud.size() + targetMax - 1) / targetMax;
    PointCloud<Point> out;
    out.source = cloud.source;
    out.points.reserve(cloud.size() / step + 1);
    for (std::size_t i = 0; i < cloud.size(); i += step) out.points.push_back(cloud.points[i]);
    return out;
}

}  // namespace painterly
