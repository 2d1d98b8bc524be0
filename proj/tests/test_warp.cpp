#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "aquagrasp/io.hpp"
#include "aquagrasp/rng.hpp"
#include "aquagrasp/warp.hpp"

using namespace aqua;

namespace {

CameraModel make_cam(double f, int w, int h) {
    CameraModel cam;
    cam.fx = f;
    cam.fy = f;
    cam.cx = w / 2.0;
    cam.cy = h / 2.0;
    cam.width = w;
    cam.height = h;
    return cam;
}

WarpSpec identity_spec(int w = 64, int h = 48) {
    WarpSpec spec;
    spec.source = make_cam(80.0, w, h);
    spec.target = spec.source;
    spec.plane_depth = 1.0;
    return spec;
}

}  // namespace

TEST_CASE("identity warp reproduces the pixel grid") {
    const WarpSpec spec = identity_spec();
    const RemapTable table = build_remap_table(spec);
    for (int y = 0; y < table.height; ++y) {
        for (int x = 0; x < table.width; ++x) {
            const size_t i = table.index(x, y);
            REQUIRE(table.valid[i] == 1);
            CHECK(std::abs(table.map_u[i] - x) < 1e-4);
            CHECK(std::abs(table.map_v[i] - y) < 1e-4);
        }
    }
}

TEST_CASE("pure horizontal translation shifts by fx*tx/Z, and halves when Z doubles") {
    // Closed-form pinhole oracle: with R = I, zero distortion and identical
    // cameras, a target pixel maps to u + fx*tx/Z, v.
    WarpSpec spec = identity_spec(96, 64);
    spec.translation = Vec3(0.05, 0.0, 0.0);
    spec.plane_depth = 1.0;
    const double offset1 = spec.source.fx * spec.translation.x() / spec.plane_depth;
    const RemapTable t1 = build_remap_table(spec);
    for (int y = 0; y < t1.height; y += 7) {
        for (int x = 0; x < t1.width; x += 5) {
            const size_t i = t1.index(x, y);
            if (!t1.valid[i]) continue;
            CHECK(std::abs(t1.map_u[i] - (x + offset1)) < 0.1);
            CHECK(std::abs(t1.map_v[i] - y) < 0.1);
        }
    }

    spec.plane_depth = 2.0;
    const RemapTable t2 = build_remap_table(spec);
    const size_t mid = t2.index(40, 30);
    REQUIRE(t2.valid[mid] == 1);
    const double offset2 = t2.map_u[mid] - 40.0;
    CHECK(offset2 == doctest::Approx(offset1 / 2.0).epsilon(1e-6));
}

TEST_CASE("transform_and_project composes rigid transform and projection") {
    WarpSpec spec = identity_spec();
    SUBCASE("optical axis maps to the principal point") {
        const Vec2 px = transform_and_project(spec, {0.0, 0.0, 1.0});
        CHECK(px.x() == doctest::Approx(spec.source.cx));
        CHECK(px.y() == doctest::Approx(spec.source.cy));
    }
    SUBCASE("translation shifts by fx*tx/Z against the no-translation result") {
        const Vec3 X2{0.1, -0.05, 1.0};
        const Vec2 base = transform_and_project(spec, X2);
        spec.translation = Vec3(0.05, 0.0, 0.0);
        const Vec2 shifted = transform_and_project(spec, X2);
        CHECK(shifted.x() - base.x() == doctest::Approx(spec.source.fx * 0.05 / X2.z()).epsilon(1e-9));
        CHECK(shifted.y() == doctest::Approx(base.y()).epsilon(1e-9));
    }
    SUBCASE("matches step-by-step composition") {
        spec.translation = Vec3(0.02, -0.01, 0.03);
        const Vec3 X2{0.3, 0.2, 1.5};
        const Vec3 X1 = spec.rotation * X2 + spec.translation;
        const Vec2 manual = spec.source.project_point(X1);
        const Vec2 composed = transform_and_project(spec, X2);
        CHECK((manual - composed).norm() < 1e-12);
    }
    SUBCASE("points behind the source camera throw") {
        spec.translation = Vec3(0.0, 0.0, -5.0);
        CHECK_THROWS_AS(transform_and_project(spec, {0.0, 0.0, 1.0}), BehindCamera);
    }
}

TEST_CASE("forward-reverse composition returns interior pixels to their origin") {
    WarpSpec fwd = identity_spec(96, 64);
    fwd.translation = Vec3(0.04, -0.02, 0.0);
    WarpSpec rev = fwd;
    rev.translation = -fwd.translation;
    const RemapTable tf = build_remap_table(fwd);
    const RemapTable tr = build_remap_table(rev);
    for (int y = 8; y < 56; y += 3) {
        for (int x = 8; x < 88; x += 3) {
            const size_t i = tf.index(x, y);
            if (!tf.valid[i]) continue;
            const double mu = tf.map_u[i];
            const double mv = tf.map_v[i];
            const int xi = static_cast<int>(std::lround(mu));
            const int yi = static_cast<int>(std::lround(mv));
            if (xi < 0 || xi >= tr.width || yi < 0 || yi >= tr.height) continue;
            const size_t ir = tr.index(xi, yi);
            if (!tr.valid[ir]) continue;
            const double round_u = tr.map_u[ir] + (mu - xi);
            const double round_v = tr.map_v[ir] + (mv - yi);
            CHECK(std::abs(round_u - x) < 0.5);
            CHECK(std::abs(round_v - y) < 0.5);
        }
    }
}

TEST_CASE("remap_image identity is bit-exact and constants stay constant") {
    const WarpSpec spec = identity_spec(32, 24);
    const RemapTable table = build_remap_table(spec);

    ImageF img(32, 24);
    Rng rng(3);
    for (auto& v : img.data) v = static_cast<float>(rng.uniform());
    const ImageF out = remap_image(table, img);
    CHECK(out == img);

    ImageF constant(32, 24, 3.25f);
    const ImageF out_const = remap_image(table, constant);
    CHECK(out_const == constant);
}

TEST_CASE("linear ramp under integer translation shifts the ramp") {
    // Analytic oracle: I(x, y) = x; a translation tx at depth Z shifts
    // lookups by exactly fx*tx/Z columns, so the output ramp is x + shift.
    WarpSpec spec = identity_spec(64, 48);
    spec.translation = Vec3(0.05, 0.0, 0.0);  // 80 px * 0.05 = 4 px shift
    const double shift = spec.source.fx * 0.05 / spec.plane_depth;
    REQUIRE(shift == doctest::Approx(4.0));
    const RemapTable table = build_remap_table(spec);
    ImageF ramp(64, 48);
    for (int y = 0; y < 48; ++y)
        for (int x = 0; x < 64; ++x) ramp.at(x, y) = static_cast<float>(x);
    const ImageF out = remap_image(table, ramp, -1.0f);
    for (int y = 4; y < 44; ++y) {
        for (int x = 4; x < 56; ++x) {
            const size_t i = table.index(x, y);
            if (!table.valid[i]) continue;
            CHECK(out.at(x, y) == doctest::Approx(x + shift).epsilon(1e-4));
        }
    }
}

TEST_CASE("nearest-mode remap snaps to integer source pixels") {
    WarpSpec spec = identity_spec(32, 24);
    spec.translation = Vec3(0.003, 0.0, 0.0);  // 0.24 px shift: rounds to the same pixel
    const RemapTable table = build_remap_table(spec);
    ImageF img(32, 24);
    Rng rng(11);
    for (auto& v : img.data) v = static_cast<float>(rng.uniform());
    const ImageF out = remap_image(table, img, 0.0f, SampleMode::Nearest);
    for (int y = 2; y < 22; ++y)
        for (int x = 2; x < 30; ++x) CHECK(out.at(x, y) == img.at(x, y));
}

TEST_CASE("remap rejects images that do not match the source resolution") {
    const WarpSpec spec = identity_spec(32, 24);
    const RemapTable table = build_remap_table(spec);
    ImageF wrong(16, 24, 0.0f);
    CHECK_THROWS_AS(remap_image(table, wrong), DimensionMismatch);
}

TEST_CASE("mask soundness: valid entries always read inside the source image") {
    WarpSpec spec = identity_spec(48, 48);
    spec.source.dist = {-0.2, 0.02, 0.001, -0.001, 0.0};
    spec.target.dist = {0.1, 0.0, 0.0, 0.0, 0.0};
    spec.translation = Vec3(0.2, 0.1, 0.0);
    const RemapTable table = build_remap_table(spec);
    size_t valid_count = 0;
    for (int y = 0; y < table.height; ++y) {
        for (int x = 0; x < table.width; ++x) {
            const size_t i = table.index(x, y);
            if (!table.valid[i]) continue;
            ++valid_count;
            CHECK(table.map_u[i] >= 0.0f);
            CHECK(table.map_u[i] < static_cast<float>(spec.source.width));
            CHECK(table.map_v[i] >= 0.0f);
            CHECK(table.map_v[i] < static_cast<float>(spec.source.height));
        }
    }
    CHECK(valid_count > 0);
}

TEST_CASE("remap table cache round-trips through the AQRT binary format") {
    WarpSpec spec = identity_spec(40, 30);
    spec.translation = Vec3(0.01, 0.02, 0.0);
    const RemapTable table = build_remap_table(spec);
    const auto path = std::filesystem::temp_directory_path() / "aqua_test_table.aqrt";
    save_remap_table(path.string(), table);
    const RemapTable loaded = load_remap_table(path.string());
    CHECK(loaded.width == table.width);
    CHECK(loaded.height == table.height);
    CHECK(loaded.map_u == table.map_u);
    CHECK(loaded.map_v == table.map_v);
    CHECK(loaded.valid == table.valid);
    std::filesystem::remove(path);
}

TEST_CASE("warp spec JSON validation catches bad rotations and depths") {
    Json j = warp_spec_to_json(identity_spec());
    j["rotation"] = {1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0};
    CHECK_THROWS_AS(warp_spec_from_json(j, "calib"), ConfigError);

    Json j2 = warp_spec_to_json(identity_spec());
    j2["plane_depth"] = -0.5;
    CHECK_THROWS_AS(warp_spec_from_json(j2, "calib"), InvalidDepth);

    Json j3 = warp_spec_to_json(identity_spec());
    j3.erase("translation");
    try {
        warp_spec_from_json(j3, "calib");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("translation") != std::string::npos);
    }
}
