#pragma once

// Data-parallel inner loops of the per-tick pipeline. Each kernel has a
// serial reference and an OpenMP version; both must produce identical output
// (same elements, same order). The public operations call the OpenMP path.

#include "painterly/depth.hpp"
#include "painterly/embodiment.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace painterly::kernels {

int thread_count() noexcept;

namespace serial {

void band_filter(const DepthFrame& frame, const FilterConfig& cfg, std::vector<ImagePoint>& out);

void map_points(std::span<const ImagePoint> in, const FrameInfo& dims, const MappingConfig& map,
                const Aabb& bounds, std::vector<WorldPoint>& out);

}  // namespace serial

namespace omp {

/// Two-pass: per-row counts, exclusive prefix sum, then a parallel fill, so
/// the output order matches the serial row-major scan.
void band_filter(const DepthFrame& frame, const FilterConfig& cfg, std::vector<ImagePoint>& out);

void map_points(std::span<const ImagePoint> in, const FrameInfo& dims, const MappingConfig& map,
                const Aabb& bounds, std::vector<WorldPoint>& out);

}  // namespace omp

}  // namespace painterly::kernels

#include "painterly/render.hpp"

namespace painterly::kernels {

// Ray-casts one facade into rows [y0, y1) of `img` (unmirrored image space).

namespace serial {
void raster_facade(const Facade& facade, const Camera& cam, Image& img, std::uint32_t y0, std::uint32_t y1);
}

namespace omp {
void raster_facade(const Facade& facade, const Camera& cam, Image& img, std::uint32_t y0, std::uint32_t y1);
}

}  // namespace painterly::kernels
