#include "painterly/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <numeric>

namespace painterly::kernels {

int thread_count() noexcept {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace {

WorldPoint map_one(const ImagePoint& p, const FrameInfo& dims, const MappingConfig& map, const Aabb& bounds) {
    return bounds.clamp(to_world(p, dims, map));
}

}  // namespace

namespace serial {

void band_filter(const DepthFrame& frame, const FilterConfig& cfg, std::vector<ImagePoint>& out) {
    out.clear();
    for (std::uint32_t y = 0; y < frame.height; y += cfg.stride)
        for (std::uint32_t x = 0; x < frame.width; x += cfg.stride) {
            const auto d = frame.at(x, y);
            if (cfg.accepts(d)) out.push_back({x, y, d});
        }
}

void map_points(std::span<const ImagePoint> in, const FrameInfo& dims, const MappingConfig& map,
                const Aabb& bounds, std::vector<WorldPoint>& out) {
    out.resize(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = map_one(in[i], dims, map, bounds);
}

}  // namespace serial

namespace omp {

void band_filter(const DepthFrame& frame, const FilterConfig& cfg, std::vector<ImagePoint>& out) {
    const std::uint32_t stride = cfg.stride;
    const auto rows = static_cast<std::int64_t>((frame.height + stride - 1) / stride);
    std::vector<std::size_t> offsets(std::size_t(rows) + 1, 0);

#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < rows; ++r) {
        const auto y = std::uint32_t(r) * stride;
        std::size_t count = 0;
        for (std::uint32_t x = 0; x < frame.width; x += stride) count += cfg.accepts(frame.at(x, y)) ? 1 : 0;
        offsets[std::size_t(r) + 1] = count;
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    out.resize(offsets.back());

#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < rows; ++r) {
        const auto y = std::uint32_t(r) * stride;
        std::size_t k = offsets[std::size_t(r)];
        for (std::uint32_t x = 0; x < frame.width; x += stride) {
            const auto d = frame.at(x, y);
            if (cfg.accepts(d)) out[k++] = {x, y, d};
        }
    }
}

void map_points(std::span<const ImagePoint> in, const FrameInfo& dims, const MappingConfig& map,
                const Aabb& bounds, std::vector<WorldPoint>& out) {
    out.resize(in.size());
    const auto n = static_cast<std::int64_t>(in.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) out[std::size_t(i)] = map_one(in[std::size_t(i)], dims, map, bounds);
}

}  // namespace omp

}  // namespace painterly::kernels

// ---------------------------------------------------------------------------
// Facade ray casting
// ---------------------------------------------------------------------------

namespace painterly::kernels {

namespace {

struct FacadeRaster {
    const Facade& facade;
    const Camera& cam;
    std::uint32_t x0 = 0, x1 = 0, y0 = 0, y1 = 0;

    FacadeRaster(const Facade& f, const Camera& c, std::uint32_t rowBegin, std::uint32_t rowEnd)
        : facade(f), cam(c) {
        double umin = 0.0, umax = c.imageWidth, vmin = 0.0, vmax = c.imageHeight;
        bool allInFront = true;
        double lo_u = 1e300, hi_u = -1e300, lo_v = 1e300, hi_v = -1e300;
        for (const auto& corner : f.corners) {
            const double dz = corner.z - c.position.z;
            if (dz <= kNearPlane) {
                allInFront = false;
                break;
            }
            const double u = c.cx() + c.focalLengthPx * (corner.x - c.position.x) / dz;
            const double v = c.cy() - c.focalLengthPx * (corner.y - c.position.y) / dz;
            lo_u = std::min(lo_u, u);
            hi_u = std::max(hi_u, u);
            lo_v = std::min(lo_v, v);
            hi_v = std::max(hi_v, v);
        }
        if (allInFront) {
            umin = std::max(umin, std::floor(lo_u) - 1.0);
            umax = std::min(umax, std::ceil(hi_u) + 1.0);
            vmin = std::max(vmin, std::floor(lo_v) - 1.0);
            vmax = std::min(vmax, std::ceil(hi_v) + 1.0);
        }
        if (umax <= umin || vmax <= vmin) return;
        x0 = std::uint32_t(umin);
        x1 = std::uint32_t(umax);
        y0 = std::max(rowBegin, std::uint32_t(vmin));
        y1 = std::min(rowEnd, std::uint32_t(vmax));
    }

    // Möller-Trumbore; returns barycentrics (b1, b2) of the hit, if any.
    static bool hit(Vec3 origin, Vec3 dir, Vec3 a, Vec3 b, Vec3 c, double& b1, double& b2) {
        const Vec3 e1 = b - a, e2 = c - a;
        const Vec3 pv = cross(dir, e2);
        const double det = dot(e1, pv);
        if (std::abs(det) < 1e-12) return false;
        const double inv = 1.0 / det;
        const Vec3 tv = origin - a;
        b1 = dot(tv, pv) * inv;
        if (b1 < 0.0 || b1 > 1.0) return false;
        const Vec3 qv = cross(tv, e1);
        b2 = dot(dir, qv) * inv;
        if (b2 < 0.0 || b1 + b2 > 1.0) return false;
        return dot(e2, qv) * inv > kNearPlane;
    }

    void shade_row(Image& img, std::uint32_t j) const {
        const auto& q = facade.corners;
        const auto& tex = facade.texture;
        const double f = cam.focalLengthPx;
        const double dy = -((j + 0.5) - cam.cy()) / f;
        for (std::uint32_t i = x0; i < x1; ++i) {
            const Vec3 dir{((i + 0.5) - cam.cx()) / f, dy, 1.0};
            double b1 = 0.0, b2 = 0.0, s = 0.0, t = 0.0;
            if (hit(cam.position, dir, q[0], q[1], q[2], b1, b2)) {
                s = b1 + b2;
                t = b2;
            } else if (hit(cam.position, dir, q[0], q[2], q[3], b1, b2)) {
                s = b1;
                t = b1 + b2;
            } else {
                continue;
            }
            const auto tx = std::min<std::uint32_t>(tex.width - 1, std::uint32_t(std::max(0.0, s * tex.width)));
            const auto ty = std::min<std::uint32_t>(tex.height - 1, std::uint32_t(std::max(0.0, t * tex.height)));
            img.set(i, j, tex.at(tx, ty));
        }
    }
};

}  // namespace

namespace serial {

void raster_facade(const Facade& facade, const Camera& cam, Image& img, std::uint32_t y0, std::uint32_t y1) {
    const FacadeRaster r(facade, cam, y0, y1);
    for (std::uint32_t j = r.y0; j < r.y1; ++j) r.shade_row(img, j);
}

}  // namespace serial

namespace omp {

void raster_facade(const Facade& facade, const Camera& cam, Image& img, std::uint32_t y0, std::uint32_t y1) {
    const FacadeRaster r(facade, cam, y0, y1);
    const auto first = static_cast<std::int64_t>(r.y0), last = static_cast<std::int64_t>(r.y1);
#pragma omp parallel for schedule(static)
    for (std::int64_t j = first; j < last; ++j) r.shade_row(img, std::uint32_t(j));
}

}  // namespace omp

}  // namespace painterly::kernels
