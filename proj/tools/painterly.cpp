// painterly: command-line front end for the live-painting engine.

#include "painterly/commands.hpp"
#include "painterly/config.hpp"
#include "painterly/error.hpp"
#include "painterly/server.hpp"

#include "CLI11.hpp"

#include <spdlog/spdlog.h>

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <optional>

using namespace painterly;

namespace {

void configure_logging() {
    const char* env = std::getenv("PAINTERLY_LOG");
    const std::string level = env ? env : "info";
    if (level == "error")
        spdlog::set_level(spdlog::level::err);
    else if (level == "warn")
        spdlog::set_level(spdlog::level::warn);
    else if (level == "debug")
        spdlog::set_level(spdlog::level::debug);
    else
        spdlog::set_level(spdlog::level::info);
}

/// Flag overrides applied on top of defaults or a config file.
struct Overrides {
    std::optional<std::filesystem::path> config;
    std::optional<std::string> seed;
    std::optional<double> tickRate;
    std::optional<std::size_t> budget;

    std::optional<double> depthThreshold, epsilon;
    std::optional<std::uint32_t> stride;

    std::optional<double> ppmX, ppmY, depthToZ;
    std::optional<bool> mirrorX;

    std::optional<std::uint32_t> particleNum;
    std::optional<std::int32_t> bufferInit;
    std::optional<double> launchSpeed, jitter, gravity, restitution, lifespan, dt;
    std::optional<std::string> emitterSource;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--config", config, "Session config JSON")->check(CLI::ExistingFile);
        cmd->add_option("--seed", seed, "RNG seed (u64 decimal)");
        cmd->add_option("--tick-rate", tickRate, "Simulation ticks per second");
        cmd->add_option("--snapshot-point-budget", budget, "Max cloud points per snapshot");
        cmd->add_option("--depth-threshold", depthThreshold, "Band center, mm");
        cmd->add_option("--epsilon", epsilon, "Band half-width, mm");
        cmd->add_option("--stride", stride, "Pixel subsampling step");
        cmd->add_option("--pixels-per-meter-x", ppmX);
        cmd->add_option("--pixels-per-meter-y", ppmY);
        cmd->add_option("--depth-to-z", depthToZ, "Meters per millimeter");
        cmd->add_option("--mirror-x", mirrorX);
        cmd->add_option("--particle-num", particleNum, "Live particle cap");
        cmd->add_option("--buffer-init", bufferInit, "Emitter buffer reset value");
        cmd->add_option("--launch-speed", launchSpeed, "m/s");
        cmd->add_option("--horizontal-jitter", jitter, "m/s");
        cmd->add_option("--gravity", gravity, "m/s^2");
        cmd->add_option("--restitution", restitution);
        cmd->add_option("--lifespan", lifespan, "Seconds");
        cmd->add_option("--dt", dt, "Fixed timestep, seconds");
        cmd->add_option("--emitter-source", emitterSource)->check(CLI::IsMember({"emitters", "wholeCloud"}));
    }

    SessionConfig resolve() const {
        SessionConfig cfg = config ? load_session_config(*config) : SessionConfig{};
        if (seed) cfg.seed = parse_seed(*seed);
        if (tickRate) {
            cfg.tickRate = *tickRate;
            if (!dt) cfg.physics.dt = 1.0 / *tickRate;
        }
        if (budget) cfg.snapshotPointBudget = *budget;
        if (depthThreshold) cfg.filter.depthThreshold = *depthThreshold;
        if (epsilon) cfg.filter.epsilon = *epsilon;
        if (stride) cfg.filter.stride = *stride;
        if (ppmX) cfg.mapping.pixelsPerMeterX = *ppmX;
        if (ppmY) cfg.mapping.pixelsPerMeterY = *ppmY;
        if (depthToZ) cfg.mapping.depthToZ = *depthToZ;
        if (mirrorX) cfg.mapping.mirrorX = *mirrorX;
        if (particleNum) cfg.physics.particleNum = *particleNum;
        if (bufferInit) cfg.physics.bufferInit = *bufferInit;
        if (launchSpeed) cfg.physics.launchSpeed = *launchSpeed;
        if (jitter) cfg.physics.horizontalJitter = *jitter;
        if (gravity) cfg.physics.gravity = *gravity;
        if (restitution) cfg.physics.restitution = *restitution;
        if (lifespan) cfg.physics.lifespanInit = *lifespan;
        if (dt) cfg.physics.dt = *dt;
        if (emitterSource)
            cfg.physics.emitterSource = *emitterSource == "wholeCloud" ? EmitterSource::WholeCloud : EmitterSource::Emitters;
        return cfg;
    }
};

int serve(const SessionConfig& cfg) {
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);  // inherited by every server thread

    Server server(cfg);
    server.start(2);
    std::cout << "listening on port " << server.port() << std::endl;
    int sig = 0;
    sigwait(&signals, &sig);
    spdlog::info("signal {}, shutting down at tick {}", sig, server.tick());
    server.stop();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();
    CLI::App app{"Painterly live-mirror engine"};
    app.require_subcommand(1);

    Overrides serveOpts, replayOpts, benchOpts, goldenOpts;

    auto* serveCmd = app.add_subcommand("serve", "Run a live session with browser viewers");
    std::optional<std::string> listen;
    serveOpts.add_to(serveCmd);
    serveCmd->get_option("--config")->required();
    serveCmd->add_option("--listen", listen, "host:port");

    auto* replayCmd = app.add_subcommand("replay", "Headless run over a recording");
    std::filesystem::path recording, scene, outDir;
    std::optional<std::uint64_t> ticks;
    replayOpts.add_to(replayCmd);
    replayCmd->add_option("--recording", recording)->required()->check(CLI::ExistingFile);
    replayCmd->add_option("--scene", scene)->required()->check(CLI::ExistingFile);
    replayCmd->add_option("--out", outDir, "Output directory")->required();
    replayCmd->add_option("--ticks", ticks, "Ticks to run (default: one pass of the recording)");

    auto* synthCmd = app.add_subcommand("synth-record", "Generate a PDR1 recording from a performer script");
    std::filesystem::path synthOut, script;
    synthCmd->add_option("--out", synthOut)->required();
    synthCmd->add_option("--script", script)->required()->check(CLI::ExistingFile);

    auto* goldenCmd = app.add_subcommand("golden", "Render the scene-only image");
    std::filesystem::path goldenScene, goldenOut;
    goldenOpts.add_to(goldenCmd);
    goldenCmd->add_option("--scene", goldenScene)->required()->check(CLI::ExistingFile);
    goldenCmd->add_option("--out", goldenOut, ".ppm or .png")->required();

    auto* benchCmd = app.add_subcommand("bench", "Per-stage timings over a recording");
    std::filesystem::path benchRecording, benchScene;
    std::optional<std::uint64_t> benchTicks;
    std::optional<std::filesystem::path> benchJson;
    benchOpts.add_to(benchCmd);
    benchCmd->add_option("--recording", benchRecording)->required()->check(CLI::ExistingFile);
    benchCmd->add_option("--scene", benchScene)->required()->check(CLI::ExistingFile);
    benchCmd->add_option("--ticks", benchTicks, "Ticks to time (default: max(one pass, 300))");
    benchCmd->add_option("--json", benchJson, "Also write the report as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*serveCmd) {
            auto cfg = serveOpts.resolve();
            if (listen) cfg.listenAddress = *listen;
            return serve(cfg);
        }
        if (*replayCmd) {
            auto cfg = replayOpts.resolve();
            cfg.recordingPath = recording;
            cfg.scenePath = scene;
            const auto result = run_replay(cfg, outDir, ticks);
            std::cout << "ticks " << result.ticks << "\nframes " << result.framesWritten << "\nstate_hash "
                      << result.finalStateHash << "\n";
            return 0;
        }
        if (*synthCmd) {
            synth_record(script, synthOut);
            return 0;
        }
        if (*goldenCmd) {
            const auto cfg = goldenOpts.resolve();
            const auto img = render_scene_only(goldenScene, cfg.camera, cfg.style);
            write_image(img, goldenOut, goldenOut.extension() == ".png" ? ImageFormat::Png : ImageFormat::Ppm);
            return 0;
        }
        if (*benchCmd) {
            auto cfg = benchOpts.resolve();
            cfg.recordingPath = benchRecording;
            cfg.scenePath = benchScene;
            const auto report = run_bench(cfg, benchTicks);
            std::cout << "ticks " << report.ticks << ", threads " << report.threads << "\n";
            std::cout << "stage          median_ms    p99_ms\n";
            for (const auto& [name, s] : report.stages)
                std::printf("%-12s %11.3f %9.3f\n", name.c_str(), s.medianMs, s.p99Ms);
            if (benchJson) {
                std::ofstream out(*benchJson);
                out << report.to_json().dump(2) << "\n";
                if (!out) throw Error(ErrorCode::IoError, "cannot write " + benchJson->string());
            }
            return 0;
        }
    } catch (const Error& e) {
        spdlog::error("{}", e.what());
        return 2;
    } catch (const std::exception& e) {
        spdlog::error("unexpected failure: {}", e.what());
        return 3;
    }
    return 0;
}
