#pragma once

#include "painterly/geometry.hpp"
#include "painterly/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace painterly {

enum class EmitterSource { Emitters, WholeCloud };

struct ParticleSystemConfig {
    std::uint32_t particleNum = 50;
    std::int32_t bufferInit = 50;
    double launchSpeed = 3.0;        // m/s, upward
    double horizontalJitter = 0.8;   // m/s, max |vx|, |vz| at spawn
    double gravity = 9.81;           // m/s^2, downward
    double restitution = 1.0;
    double lifespanInit = 3.0;       // s
    double dt = 1.0 / 60.0;          // s
    EmitterSource emitterSource = EmitterSource::Emitters;

    bool valid() const noexcept {
        return particleNum >= 1 && bufferInit >= 0 && dt > 0.0 && restitution >= 0.0 && restitution <= 1.0;
    }
};

struct Particle {
    WorldPoint position;
    Vec3 velocity;
    double lifespan = 0.0;  // seconds remaining
    ObjectKind kind;
};

struct ParticleSystemState {
    std::vector<Particle> particles;
    std::int32_t buffer = 50;
    Rng rng;

    static ParticleSystemState initial(const ParticleSystemConfig& cfg, std::uint64_t seed) {
        return {{}, cfg.bufferInit, Rng(seed)};
    }
};

/// Uniform draw over the palette. Throws Error{EmptyPalette}.
ObjectKind sample_object_kind(Rng& rng, std::span<const PaletteEntry> palette);

/// Buffer-gated emitter loop: one pass over `sources` in order; a point spawns
/// when the live list is below the cap and the buffer has run down to zero,
/// which resets the buffer; every other point decrements it (floored at 0).
/// Returns the number of particles spawned. Expired particles are purged by
/// integrate(), not here.
std::size_t emit_step(ParticleSystemState& state, std::span<const WorldPoint> sources,
                      const ParticleSystemConfig& cfg, std::span<const PaletteEntry> palette);

/// Semi-implicit Euler with ground bounce, lifespan decay and purge of
/// particles whose lifespan reached zero. Survivor order is preserved.
void integrate(ParticleSystemState& state, double groundY, const ParticleSystemConfig& cfg);

/// One tick: emit_step followed by integrate. Returns the spawn count.
std::size_t step(ParticleSystemState& state, std::span<const WorldPoint> sources, double groundY,
                 const ParticleSystemConfig& cfg, std::span<const PaletteEntry> palette);

}  // namespace painterly
