#include "doctest.h"
#include "oracles.hpp"

#include "painterly/error.hpp"
#include "painterly/render.hpp"

#include <cmath>
#include <fstream>

using namespace painterly;

namespace {

const std::filesystem::path kScenes = std::filesystem::path(PAINTERLY_DATA_DIR) / "scenes";

std::shared_ptr<const PainterlyScene> scene_named(const char* name) {
    return std::make_shared<const PainterlyScene>(load_scene(kScenes / name));
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

WorldState busy_world(std::shared_ptr<const PainterlyScene> scene) {
    WorldCloud cloud;
    for (int i = 0; i < 200; ++i) cloud.points.push_back({-1.2 + 0.004 * i, 0.2 + 0.007 * i, 0.9});
    std::vector<Particle> ps(6);
    for (int i = 0; i < 6; ++i) {
        ps[i].position = {-1.0 + 0.3 * i, 1.0 + 0.2 * i, 1.0 + 0.25 * i};
        ps[i].kind = ObjectKind{std::uint32_t(i % 4)};
        ps[i].lifespan = 1.0;
    }
    return compose(std::move(scene), cloud, ps, {}, 3);
}

}  // namespace

TEST_CASE("project") {
    Camera cam;
    cam.mirror = false;
    SUBCASE("a point on the optical axis lands at the image center") {
        const auto p = project({0, 1.2, 1.0}, cam);
        REQUIRE(p);
        CHECK(p->u == 480.0);
        CHECK(p->v == 270.0);
        CHECK(p->depth == 3.5);
    }
    SUBCASE("offsets scale with focal length over depth") {
        const auto p = project({1.0, 2.2, 4.5}, cam);
        REQUIRE(p);
        CHECK(p->u == doctest::Approx(480.0 + 100.0));
        CHECK(p->v == doctest::Approx(270.0 - 100.0));
    }
    SUBCASE("mirroring reflects u about the center") {
        Camera m = cam;
        m.mirror = true;
        const auto a = project({0.7, 1.5, 2.0}, cam), b = project({0.7, 1.5, 2.0}, m);
        REQUIRE(a);
        REQUIRE(b);
        CHECK(a->u - 480.0 == doctest::Approx(480.0 - b->u));
        CHECK(a->v == b->v);
    }
    SUBCASE("points behind or on the near plane are rejected") {
        CHECK_FALSE(project({0, 1.2, -3.0}, cam));
        CHECK_FALSE(project({0, 1.2, -2.5}, cam));
        CHECK_FALSE(project({0, 1.2, -2.5 + kNearPlane}, cam));
        CHECK(project({0, 1.2, -2.5 + 2 * kNearPlane}, cam));
    }
}

TEST_CASE("render is deterministic") {
    const auto world = busy_world(scene_named("courtyard.json"));
    const Camera cam;
    CHECK(render_frame(world, cam) == render_frame(world, cam));
}

TEST_CASE("billboard is centered on its projected anchor") {
    auto scene = load_scene(kScenes / "courtyard.json");
    const Rgb marker{1, 2, 3};
    for (auto& s : scene.sprites) s = Image(16, 16, marker);
    const std::vector<WorldPoint> anchors{{0, 1.2, 1.0}, {-1.1, 0.7, 2.0}, {1.3, 2.1, 1.4}, {0.37, 1.91, 2.6}};
    for (const auto& a : anchors) {
        scene.placedObjects = {PlacedObject{ObjectKind{0}, a, 0.3}};
        const auto world = compose(std::make_shared<const PainterlyScene>(scene), {}, {}, {}, 0);
        Camera cam;
        cam.mirror = false;
        const auto img = render_frame(world, cam);
        long minX = long(img.width), maxX = -1, minY = long(img.height), maxY = -1;
        for (std::uint32_t y = 0; y < img.height; ++y)
            for (std::uint32_t x = 0; x < img.width; ++x)
                if (img.at(x, y) == marker) {
                    minX = std::min<long>(minX, x);
                    maxX = std::max<long>(maxX, x);
                    minY = std::min<long>(minY, y);
                    maxY = std::max<long>(maxY, y);
                }
        REQUIRE(maxX >= 0);
        const auto p = project(a, cam);
        REQUIRE(p);
        CHECK(std::abs((minX + maxX + 1) / 2.0 - p->u) <= 1.0);
        CHECK(std::abs((minY + maxY + 1) / 2.0 - p->v) <= 1.0);
        const double edge = cam.focalLengthPx * 0.3 / p->depth;
        CHECK(std::abs(double(maxX - minX + 1) - edge) <= 1.0);
    }
}

TEST_CASE("mirrored render is the horizontal flip of the unmirrored one") {
    for (const char* name : {"asymmetric.json", "courtyard.json"}) {
        const auto world = busy_world(scene_named(name));
        Camera plain;
        plain.mirror = false;
        Camera mirrored;
        mirrored.mirror = true;
        const auto a = render_frame(world, plain), b = render_frame(world, mirrored);
        CHECK(flip_horizontal(a) == b);
        CHECK(flip_horizontal(b) == a);
        CHECK_FALSE(a == b);
    }
}

TEST_CASE("nearer drawables cover farther ones") {
    auto scene = load_scene(kScenes / "courtyard.json");
    scene.placedObjects.clear();
    scene.sprites[0] = Image(8, 8, Rgb{200, 10, 10});
    scene.sprites[1] = Image(8, 8, Rgb{10, 10, 200});
    std::vector<Particle> ps(2);
    ps[0].position = {0, 1.2, 1.0};  // near, red
    ps[0].kind = ObjectKind{0};
    ps[1].position = {0, 1.2, 2.0};  // far, blue, listed last
    ps[1].kind = ObjectKind{1};
    const auto world = compose(std::make_shared<const PainterlyScene>(scene), {}, ps, {}, 0);
    Camera cam;
    cam.mirror = false;
    CHECK(render_frame(world, cam).at(480, 270) == Rgb{200, 10, 10});
}

TEST_CASE("image writing") {
    const auto dir = oracle::temp_dir("render");
    SUBCASE("1x1 PPM layout") {
        Image img(1, 1, Rgb{9, 8, 7});
        const auto bytes = encode_ppm(img);
        const std::string header = "P6\n1 1\n255\n";
        REQUIRE(bytes.size() == 14);
        CHECK(std::string(bytes.begin(), bytes.begin() + 11) == header);
        CHECK(bytes[11] == 9);
        CHECK(bytes[12] == 8);
        CHECK(bytes[13] == 7);
        write_image(img, dir / "one.ppm", ImageFormat::Ppm);
        CHECK(slurp(dir / "one.ppm") == bytes);
    }
    SUBCASE("PPM round trip") {
        const auto img = render_frame(busy_world(scene_named("courtyard.json")), Camera{});
        write_image(img, dir / "frame.ppm", ImageFormat::Ppm);
        CHECK(read_ppm(dir / "frame.ppm") == img);
    }
    SUBCASE("PNG signature") {
        Image img(4, 3, Rgb{1, 2, 3});
        write_image(img, dir / "tiny.png", ImageFormat::Png);
        const auto bytes = slurp(dir / "tiny.png");
        const std::vector<std::uint8_t> sig{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
        REQUIRE(bytes.size() > sig.size());
        CHECK(std::equal(sig.begin(), sig.end(), bytes.begin()));
    }
    SUBCASE("unwritable destination") {
        try {
            write_image(Image(1, 1), dir / "missing_dir" / "x.ppm", ImageFormat::Ppm);
            FAIL("expected IoError");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::IoError);
        }
    }
    SUBCASE("flip is an involution") {
        Image img(3, 2);
        img.set(0, 0, Rgb{1, 1, 1});
        img.set(2, 1, Rgb{2, 2, 2});
        const auto f = flip_horizontal(img);
        CHECK(f.at(2, 0) == Rgb{1, 1, 1});
        CHECK(f.at(0, 1) == Rgb{2, 2, 2});
        CHECK(flip_horizontal(f) == img);
    }
}
