#include "doctest.h"
#include "oracles.hpp"

#include "painterly/depth.hpp"
#include "painterly/error.hpp"

#include <fstream>

using namespace painterly;

namespace {

// 2 frames of 4x4 at 30 fps, written out byte by byte.
std::vector<std::uint8_t> fixture_bytes() {
    std::vector<std::uint8_t> b = {'P', 'D', 'R', '1',
                                   4, 0, 0, 0,                           // width
                                   4, 0, 0, 0,                           // height
                                   2, 0, 0, 0,                           // frameCount
                                   0, 0, 0, 0, 0, 0, 0x3E, 0x40};        // 30.0
    const std::uint8_t row0[] = {0xD0, 0x07, 0x34, 0x12, 0x00, 0x00, 0xFF, 0xFF};
    const std::uint8_t rowN[] = {0x01, 0x00, 0x00, 0x01, 0xE8, 0x03, 0x10, 0x27};
    b.insert(b.end(), std::begin(row0), std::end(row0));
    for (int r = 0; r < 3; ++r) b.insert(b.end(), std::begin(rowN), std::end(rowN));
    for (int i = 0; i < 16; ++i) {
        b.push_back(0x64);
        b.push_back(0x00);
    }
    return b;
}

std::filesystem::path write_bytes(const std::string& name, const std::vector<std::uint8_t>& bytes) {
    const auto path = oracle::temp_dir("depth") / name;
    std::ofstream(path, std::ios::binary).write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    return path;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::IoError;
}

int silhouette_bbox(const DepthFrame& f, std::uint16_t background, int& x0, int& x1, int& y0, int& y1) {
    int count = 0;
    x0 = y0 = 1 << 30;
    x1 = y1 = -1;
    for (int y = 0; y < int(f.height); ++y)
        for (int x = 0; x < int(f.width); ++x)
            if (f.at(x, y) != background) {
                ++count;
                x0 = std::min(x0, x);
                x1 = std::max(x1, x);
                y0 = std::min(y0, y);
                y1 = std::max(y1, y);
            }
    return count;
}

}  // namespace

TEST_CASE("open_recording reads the header of a hand-written fixture") {
    auto stream = open_recording(write_bytes("ok.pdr1", fixture_bytes()));
    CHECK(stream.frame_count() == 2);
    CHECK(stream.fps() == 30.0);
    CHECK(stream.header().width == 4);
    CHECK(stream.header().height == 4);
}

TEST_CASE("frame 0 decodes the fixture bytes little-endian") {
    auto stream = open_recording(write_bytes("ok.pdr1", fixture_bytes()));
    const auto f0 = stream.next_frame();
    REQUIRE(f0);
    const std::vector<std::uint16_t> expected = {2000, 4660, 0, 65535, 1, 256, 1000, 10000,
                                                 1,    256,  1000, 10000, 1, 256, 1000, 10000};
    CHECK(f0->samples == expected);
    CHECK(f0->timestamp == 0.0);
    const auto f1 = stream.next_frame();
    REQUIRE(f1);
    CHECK(f1->samples == std::vector<std::uint16_t>(16, 100));
}

TEST_CASE("next_frame reports end of stream forever after the last frame") {
    auto stream = open_recording(write_bytes("ok.pdr1", fixture_bytes()));
    CHECK(stream.next_frame());
    CHECK(stream.next_frame());
    CHECK_FALSE(stream.next_frame());
    CHECK_FALSE(stream.next_frame());
    stream.rewind();
    CHECK(stream.next_frame());
}

TEST_CASE("frame timestamps are k/fps") {
    std::vector<DepthFrame> frames(5, DepthFrame{2, 1, {1, 2}, 0.0});
    const auto bytes = encode_recording({2, 1, 5, 30.0}, frames);
    auto stream = DepthStream::from_bytes(bytes);
    for (int k = 0; k < 3; ++k) stream.next_frame();
    CHECK(stream.next_frame()->timestamp == 0.1);
}

TEST_CASE("recording errors") {
    auto bytes = fixture_bytes();
    SUBCASE("bad magic") {
        bytes[0] = bytes[1] = bytes[2] = bytes[3] = 'X';
        CHECK(code_of([&] { open_recording(write_bytes("magic.pdr1", bytes)); }) == ErrorCode::BadMagic);
    }
    SUBCASE("declared frames exceed payload") {
        std::vector<DepthFrame> frames(9, DepthFrame{4, 4, std::vector<std::uint16_t>(16, 7), 0.0});
        auto nine = encode_recording({4, 4, 9, 30.0}, frames);
        nine[12] = 10;  // header now claims 10 frames
        CHECK(code_of([&] { open_recording(write_bytes("trunc.pdr1", nine)); }) == ErrorCode::TruncatedFile);
    }
    SUBCASE("short header") {
        bytes.resize(10);
        CHECK(code_of([&] { DepthStream::from_bytes(bytes); }) == ErrorCode::TruncatedFile);
    }
    SUBCASE("trailing bytes") {
        bytes.push_back(0);
        CHECK(code_of([&] { DepthStream::from_bytes(bytes); }) == ErrorCode::TruncatedFile);
    }
    SUBCASE("zero width") {
        bytes[4] = 0;
        CHECK(code_of([&] { DepthStream::from_bytes(bytes); }) == ErrorCode::BadHeader);
    }
    SUBCASE("missing file") {
        CHECK(code_of([] { open_recording("/nonexistent/none.pdr1"); }) == ErrorCode::MissingFile);
    }
}

TEST_CASE("decode then re-encode is byte-identical") {
    CHECK(DepthStream::from_bytes(fixture_bytes()).encode() == fixture_bytes());

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const std::uint32_t w = 1 + rng() % 17, h = 1 + rng() % 13, n = rng() % 5;
        std::vector<DepthFrame> frames;
        for (std::uint32_t k = 0; k < n; ++k) frames.push_back(oracle::random_frame(rng, w, h));
        const double fps = 1.0 + double(rng() % 1000) / 7.0;
        const auto bytes = encode_recording({w, h, n, fps}, frames);
        REQUIRE(bytes.size() == kRecordingHeaderBytes + std::size_t(w) * h * n * 2);
        CHECK(DepthStream::from_bytes(bytes).encode() == bytes);
    }
}

TEST_CASE("parse_pgm") {
    SUBCASE("direct transcription") {
        const auto f = parse_pgm("P2 2 2 65535\n100 200 300 400\n");
        CHECK(f.width == 2);
        CHECK(f.height == 2);
        CHECK(f.samples == std::vector<std::uint16_t>{100, 200, 300, 400});
    }
    SUBCASE("comments are skipped") {
        const auto f = parse_pgm("P2\n# depth fixture\n1 2\n# max\n4000\n1500 # first\n2500\n");
        CHECK(f.samples == std::vector<std::uint16_t>{1500, 2500});
    }
    SUBCASE("maxval above 16 bits") {
        CHECK(code_of([] { parse_pgm("P2 1 1 70000\n5\n"); }) == ErrorCode::ValueOutOfRange);
    }
    SUBCASE("sample above maxval") {
        CHECK(code_of([] { parse_pgm("P2 1 1 255\n300\n"); }) == ErrorCode::ValueOutOfRange);
    }
    SUBCASE("binary P5 header") {
        CHECK(code_of([] { parse_pgm("P5 1 1 255\n\x01"); }) == ErrorCode::BadHeader);
    }
    SUBCASE("too few samples") {
        CHECK(code_of([] { parse_pgm("P2 2 2 255\n1 2 3\n"); }) == ErrorCode::BadHeader);
    }
}

TEST_CASE("synthetic performer at stage center is horizontally centered") {
    const SynthConfig cfg;
    const auto f = synth_frame({}, cfg, 0.0);
    int x0, x1, y0, y1;
    REQUIRE(silhouette_bbox(f, cfg.backgroundDepth, x0, x1, y0, y1) > 0);
    CHECK(x0 + x1 == int(cfg.frameWidth) - 1);
}

TEST_CASE("jumping translates the silhouette vertically without changing its shape") {
    const SynthConfig cfg;
    PerformerState grounded, airborne;
    airborne.jumpPhase = 0.5;
    const auto a = synth_frame(grounded, cfg, 0.0);
    const auto b = synth_frame(airborne, cfg, 0.0);
    const int shift = int(std::lround(0.5 * cfg.jumpHeightPx));
    REQUIRE(shift > 0);
    int differing = 0;
    for (int y = 0; y < int(cfg.frameHeight); ++y)
        for (int x = 0; x < int(cfg.frameWidth); ++x) {
            const int src = y + shift;
            const auto expected = src < int(cfg.frameHeight) ? a.at(x, src) : cfg.backgroundDepth;
            differing += b.at(x, y) != expected;
        }
    CHECK(differing == 0);
    CHECK(a.samples != b.samples);
}

TEST_CASE("a raised left hand reaches above the head") {
    const SynthConfig cfg;
    const int headTop = int(cfg.frameHeight - cfg.floorMarginPx - cfg.bodyHeightPx);
    auto pixels_above_head = [&](const DepthFrame& f, bool leftHalf) {
        int n = 0;
        for (int y = 0; y < headTop; ++y)
            for (int x = 0; x < int(cfg.frameWidth); ++x)
                if (f.at(x, y) != cfg.backgroundDepth && (x < int(cfg.frameWidth) / 2) == leftHalf) ++n;
        return n;
    };
    PerformerState p;
    CHECK(pixels_above_head(synth_frame(p, cfg, 0.0), true) == 0);
    p.leftHandRaised = true;
    const auto f = synth_frame(p, cfg, 0.0);
    CHECK(pixels_above_head(f, true) > 0);
    CHECK(pixels_above_head(f, false) == 0);
}

TEST_CASE("synth_frame is deterministic and every silhouette pixel is nearer than the background") {
    const SynthConfig cfg;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> xs(-cfg.stageHalfWidth, cfg.stageHalfWidth), ds(400, 5999), js(0, 1);
    for (int i = 0; i < 20; ++i) {
        const PerformerState p{xs(rng), ds(rng), js(rng), bool(rng() & 1), bool(rng() & 1)};
        REQUIRE(performer_valid(p, cfg));
        const auto a = synth_frame(p, cfg, 0.25 * i);
        CHECK(a.samples == synth_frame(p, cfg, 0.25 * i).samples);
        CHECK(a.timestamp == 0.25 * i);
        for (auto s : a.samples) CHECK((s == cfg.backgroundDepth || s < cfg.backgroundDepth));
        int x0, x1, y0, y1;
        CHECK(silhouette_bbox(a, cfg.backgroundDepth, x0, x1, y0, y1) > 0);
    }
}

TEST_CASE("performer validity") {
    const SynthConfig cfg;
    CHECK(performer_valid({}, cfg));
    CHECK_FALSE(performer_valid({2.0, 2000, 0, false, false}, cfg));
    CHECK_FALSE(performer_valid({0.0, 300, 0, false, false}, cfg));
    CHECK_FALSE(performer_valid({0.0, 7000, 0, false, false}, cfg));  // behind the background
    CHECK_FALSE(performer_valid({0.0, 2000, 1.5, false, false}, cfg));
}
