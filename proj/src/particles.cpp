#include "painterly/particles.hpp"

#include "painterly/error.hpp"

#include <algorithm>
#include <sstream>

namespace painterly {

std::string Rng::serialize() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
}

ObjectKind sample_object_kind(Rng& rng, std::span<const PaletteEntry> palette) {
    if (palette.empty()) throw Error(ErrorCode::EmptyPalette, "cannot sample an object kind");
    return {static_cast<std::uint32_t>(rng.below(palette.size()))};
}

std::size_t emit_step(ParticleSystemState& state, std::span<const WorldPoint> sources,
                      const ParticleSystemConfig& cfg, std::span<const PaletteEntry> palette) {
    if (palette.empty() && !sources.empty()) throw Error(ErrorCode::EmptyPalette, "cannot sample an object kind");

    std::size_t spawned = 0;
    for (const auto& point : sources) {
        if (state.particles.size() < cfg.particleNum && state.buffer == 0) {
            Particle p;
            p.position = point;
            const double vx = state.rng.uniform(-cfg.horizontalJitter, cfg.horizontalJitter);
            const double vz = state.rng.uniform(-cfg.horizontalJitter, cfg.horizontalJitter);
            p.velocity = {vx, cfg.launchSpeed, vz};
            p.kind = sample_object_kind(state.rng, palette);
            p.lifespan = cfg.lifespanInit;
            state.particles.push_back(p);
            state.buffer = cfg.bufferInit;
            ++spawned;
        } else {
            state.buffer = std::max(state.buffer - 1, 0);
        }
    }
    return spawned;
}

void integrate(ParticleSystemState& state, double groundY, const ParticleSystemConfig& cfg) {
    for (auto& p : state.particles) {
        p.velocity.y -= cfg.gravity * cfg.dt;
        p.position = p.position + p.velocity * cfg.dt;
        if (p.position.y < groundY) {
            p.position.y = groundY;
            p.velocity.y = -cfg.restitution * p.velocity.y;
        }
        p.lifespan -= cfg.dt;
    }
    std::erase_if(state.particles, [](const Particle& p) { return p.lifespan <= 0.0; });
}

std::size_t step(ParticleSystemState& state, std::span<const WorldPoint> sources, double groundY,
                 const ParticleSystemConfig& cfg, std::span<const PaletteEntry> palette) {
    const auto spawned = emit_step(state, sources, cfg, palette);
    integrate(state, groundY, cfg);
    return spawned;
}

}  // namespace painterly
