#include "painterly/render.hpp"

#include "painterly/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace painterly {

std::optional<Projection> project(const WorldPoint& p, const Camera& cam) {
    const double dz = p.z - cam.position.z;
    if (dz <= kNearPlane) return std::nullopt;
    const double lateral = cam.focalLengthPx * (p.x - cam.position.x) / dz;
    return Projection{cam.mirror ? cam.cx() - lateral : cam.cx() + lateral,
                      cam.cy() - cam.focalLengthPx * (p.y - cam.position.y) / dz, dz};
}

namespace {

struct Drawable {
    enum class Kind { Billboard, Splat } kind;
    WorldPoint position;
    double size = 0.0;           // billboard edge, meters
    const Image* sprite = nullptr;
};

// Pixel range [lo, hi) whose centers fall in [a, b).
std::pair<long, long> covered(double a, double b, std::uint32_t limit) {
    const long lo = std::max(0L, long(std::ceil(a - 0.5)));
    const long hi = std::min(long(limit), long(std::ceil(b - 0.5)));
    return {lo, hi};
}

void draw_billboard(Image& img, const Projection& p, double edgePx, const Image& sprite) {
    const double left = p.u - edgePx / 2.0, top = p.v - edgePx / 2.0;
    const auto [i0, i1] = covered(left, left + edgePx, img.width);
    const auto [j0, j1] = covered(top, top + edgePx, img.height);
    for (long j = j0; j < j1; ++j) {
        const auto ty = std::min<std::uint32_t>(sprite.height - 1,
                                                std::uint32_t(((j + 0.5) - top) / edgePx * sprite.height));
        for (long i = i0; i < i1; ++i) {
            const auto tx = std::min<std::uint32_t>(sprite.width - 1,
                                                    std::uint32_t(((i + 0.5) - left) / edgePx * sprite.width));
            const Rgb c = sprite.at(tx, ty);
            if (c != kSpriteKey) img.set(std::uint32_t(i), std::uint32_t(j), c);
        }
    }
}

void draw_splat(Image& img, const Projection& p, double radius, Rgb color) {
    const auto [i0, i1] = covered(p.u - radius, p.u + radius + 1e-9, img.width);
    const auto [j0, j1] = covered(p.v - radius, p.v + radius + 1e-9, img.height);
    const double r2 = radius * radius;
    for (long j = j0; j < j1; ++j)
        for (long i = i0; i < i1; ++i) {
            const double dx = (i + 0.5) - p.u, dy = (j + 0.5) - p.v;
            if (dx * dx + dy * dy <= r2) img.set(std::uint32_t(i), std::uint32_t(j), color);
        }
}

}  // namespace

Image render_frame(const WorldState& world, const Camera& camIn, const RenderStyle& style) {
    Camera cam = camIn;
    cam.mirror = false;
    Image img(cam.imageWidth, cam.imageHeight, style.background);
    const auto& scene = *world.scene;

    std::array<std::size_t, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scene.facades[a].mean_z() > scene.facades[b].mean_z();
    });
    for (auto f : order) kernels::omp::raster_facade(scene.facades[f], cam, img, 0, cam.imageHeight);

    std::vector<Drawable> items;
    items.reserve(scene.placedObjects.size() + world.particles.size() + world.cloud.size());
    for (const auto& o : scene.placedObjects)
        items.push_back({Drawable::Kind::Billboard, o.position, o.scale, &scene.sprites[o.kind.index]});
    for (const auto& p : world.particles)
        items.push_back({Drawable::Kind::Billboard, p.position, scene.palette[p.kind.index].size,
                         &scene.sprites[p.kind.index]});
    for (const auto& p : world.cloud.points) items.push_back({Drawable::Kind::Splat, p, 0.0, nullptr});

    std::stable_sort(items.begin(), items.end(),
                     [](const Drawable& a, const Drawable& b) { return a.position.z > b.position.z; });
    for (const auto& item : items) {
        const auto proj = project(item.position, cam);
        if (!proj) continue;
        if (item.kind == Drawable::Kind::Splat)
            draw_splat(img, *proj, style.splatRadiusPx, style.splatColor);
        else
            draw_billboard(img, *proj, cam.focalLengthPx * item.size / proj->depth, *item.sprite);
    }
    return camIn.mirror ? flip_horizontal(img) : img;
}

}  // namespace painterly
