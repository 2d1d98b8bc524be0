#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <optional>

#include "aquagrasp/labeling.hpp"
#include "aquagrasp/rng.hpp"
#include "aquagrasp/warp.hpp"

using namespace aqua;
using namespace aqua::label;

namespace {

WidthSignal make_signal(const std::vector<double>& w, double rate = 10.0) {
    WidthSignal sig;
    sig.sample_rate = rate;
    for (size_t i = 0; i < w.size(); ++i) sig.t.push_back(static_cast<double>(i) / rate);
    sig.w = w;
    return sig;
}

// Exhaustive oracle: direct O(n*w) scan over every index with the same
// drop-then-plateau definition, no incremental state.
std::optional<size_t> brute_force_closure(const WidthSignal& sig, const ClosureParams& p) {
    const size_t n = sig.w.size();
    const auto window_n = static_cast<size_t>(std::llround(p.window * sig.sample_rate));
    const auto plateau_n = static_cast<size_t>(std::llround(p.min_plateau * sig.sample_rate));
    if (n < window_n + plateau_n + 1) return std::nullopt;
    for (size_t i = 0; i < n; ++i) {
        double wmax = sig.w[i];
        for (size_t k = i >= window_n ? i - window_n : 0; k <= i; ++k) wmax = std::max(wmax, sig.w[k]);
        if (wmax - sig.w[i] < p.min_drop) continue;
        if (i + plateau_n >= n) continue;
        double lo = sig.w[i], hi = sig.w[i];
        for (size_t k = i; k <= i + plateau_n; ++k) {
            lo = std::min(lo, sig.w[k]);
            hi = std::max(hi, sig.w[k]);
        }
        if (hi - lo <= p.plateau_tol) return i;
    }
    return std::nullopt;
}

std::vector<double> step_signal(size_t n, size_t step_at, double high, double low) {
    std::vector<double> w(n, high);
    for (size_t i = step_at; i < n; ++i) w[i] = low;
    return w;
}

}  // namespace

TEST_CASE("closure on an exact step lands at the step time") {
    const WidthSignal sig = make_signal(step_signal(120, 50, 1.0, 0.2));
    ClosureParams p;
    p.min_drop = 0.5;
    p.min_plateau = 1.0;
    const ClosureEvent ev = detect_closure(sig, p);
    CHECK(ev.t_star == doctest::Approx(5.0));
    CHECK(ev.index == 50);
    CHECK(ev.drop_magnitude == doctest::Approx(0.8));
}

TEST_CASE("a slow ramp below the drop threshold yields NoClosureFound") {
    std::vector<double> w(200);
    for (size_t i = 0; i < w.size(); ++i) w[i] = 1.0 - 0.002 * static_cast<double>(i);
    CHECK_THROWS_AS(detect_closure(make_signal(w), ClosureParams{}), NoClosureFound);
}

TEST_CASE("too-short signals are rejected") {
    CHECK_THROWS_AS(detect_closure(make_signal(std::vector<double>(10, 1.0)), ClosureParams{}),
                    NoClosureFound);
}

TEST_CASE("noisy steps: detected t* stays within one window of the true step") {
    ClosureParams p;
    p.plateau_tol = 0.15;
    Rng rng(42);
    int detected = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const size_t step_at = 30 + rng.uniform_index(60);
        std::vector<double> w = step_signal(150, step_at, 1.0, 0.2);
        for (auto& v : w) v = std::clamp(v + rng.uniform(-0.05, 0.05), 0.0, 1.0);
        const WidthSignal sig = make_signal(w);
        try {
            const ClosureEvent ev = detect_closure(sig, p);
            ++detected;
            CHECK(std::abs(static_cast<double>(ev.index) - static_cast<double>(step_at)) <=
                  p.window * sig.sample_rate);
        } catch (const NoClosureFound&) {
        }
    }
    CHECK(detected > 990);  // 0.05-amplitude noise rarely defeats a 0.8 drop
}

TEST_CASE("streaming detector equals the exhaustive brute-force scan on a property corpus") {
    ClosureParams p;
    p.plateau_tol = 0.15;
    Rng rng(7);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> w;
        const int flavor = static_cast<int>(rng.uniform_index(4));
        const size_t n = 80 + rng.uniform_index(100);
        const size_t step_at = 20 + rng.uniform_index(n / 2);
        switch (flavor) {
            case 0: w = step_signal(n, step_at, 1.0, rng.uniform(0.0, 0.4)); break;
            case 1: {  // ramp
                w.resize(n);
                const double slope = rng.uniform(0.0005, 0.01);
                for (size_t i = 0; i < n; ++i) w[i] = std::clamp(1.0 - slope * static_cast<double>(i), 0.0, 1.0);
                break;
            }
            case 2: {  // noisy step, amplitudes 0.02..0.1
                w = step_signal(n, step_at, 1.0, 0.2);
                const double amp = rng.uniform(0.02, 0.1);
                for (auto& v : w) v = std::clamp(v + rng.uniform(-amp, amp), 0.0, 1.0);
                break;
            }
            default: {  // multi-step with a partial reopen
                w = step_signal(n, step_at, 1.0, 0.5);
                for (size_t i = std::min(n, step_at + 15); i < n; ++i) w[i] = 0.1;
                break;
            }
        }
        const WidthSignal sig = make_signal(w);
        const auto oracle = brute_force_closure(sig, p);
        try {
            const ClosureEvent ev = detect_closure(sig, p);
            REQUIRE(oracle.has_value());
            CHECK(ev.index == *oracle);
        } catch (const NoClosureFound&) {
            CHECK_FALSE(oracle.has_value());
        }
        ++checked;
    }
    CHECK(checked == 1000);
}

TEST_CASE("backtrack copies the oracle track and applies the visibility contract") {
    std::vector<TrackSample> oracle;
    for (int i = 0; i <= 40; ++i) {
        TrackSample s;
        s.frame = i;
        s.u = 10.0 + 3.0 * i;  // leaves a 100-px-wide frame at u >= 100
        s.v = 50.0;
        s.visible = true;
        oracle.push_back(s);
    }
    SUBCASE("static track is constant everywhere") {
        std::vector<TrackSample> fixed = oracle;
        for (auto& s : fixed) {
            s.u = 30.0;
            s.v = 40.0;
        }
        const ContactTrack track = backtrack_contact(fixed, 40, 100, 100);
        REQUIRE(track.samples.size() == 41);
        for (const auto& s : track.samples) {
            CHECK(s.u == 30.0);
            CHECK(s.v == 40.0);
            CHECK(s.visible);
        }
    }
    SUBCASE("linear motion matches the projection oracle with edge-exit invisibility") {
        const ContactTrack track = backtrack_contact(oracle, 25, 100, 100);  // anchor at u=85
        REQUIRE(track.samples.size() == 26);
        for (int i = 0; i <= 25; ++i) {
            CHECK(track.samples[i].u == doctest::Approx(10.0 + 3.0 * i));
            CHECK(track.samples[i].visible);
        }
    }
    SUBCASE("frames where the point is out of the image are invisible") {
        // Push the early portion out of frame on the left.
        std::vector<TrackSample> shifted = oracle;
        for (auto& s : shifted) s.u -= 40.0;  // frames 0..13 have u < 0
        const ContactTrack track = backtrack_contact(shifted, 30, 100, 100);
        for (int i = 0; i <= 30; ++i) {
            const bool in_frame = shifted[i].u >= 0.0;
            CHECK(track.samples[i].visible == in_frame);
        }
    }
    SUBCASE("anchor outside the image raises SeedOutOfFrame") {
        CHECK_THROWS_AS(backtrack_contact(oracle, 40, 100, 100), SeedOutOfFrame);  // u=130
    }
}

TEST_CASE("track files round-trip through the line-delimited format") {
    std::vector<TrackSample> track;
    for (int i = 0; i < 10; ++i) track.push_back({i, 1.5 * i, 80.0 - i, i % 3 != 0});
    const auto path = std::filesystem::temp_directory_path() / "aqua_track.jsonl";
    write_track_file(path.string(), track);
    const auto loaded = read_track_file(path.string());
    REQUIRE(loaded.size() == track.size());
    for (size_t i = 0; i < track.size(); ++i) {
        CHECK(loaded[i].frame == track[i].frame);
        CHECK(loaded[i].u == track[i].u);
        CHECK(loaded[i].v == track[i].v);
        CHECK(loaded[i].visible == track[i].visible);
    }
    std::filesystem::remove(path);
}

TEST_CASE("depth normalization anchors, clamping, and idempotence") {
    const NormSpec norm{0.2, 1.2};
    ImageF at_min(8, 8, 0.2f);
    const ImageF zeros = normalize_depth(at_min, norm);
    for (const float v : zeros.data) CHECK(v == 0.0f);

    ImageF above(8, 8, 5.0f);
    const ImageF ones = normalize_depth(above, norm);
    for (const float v : ones.data) CHECK(v == 1.0f);

    // Idempotence: normalize, denormalize, normalize again.
    ImageF mixed(8, 8);
    Rng rng(5);
    for (auto& v : mixed.data) v = static_cast<float>(rng.uniform(0.2, 1.2));
    const ImageF n1 = normalize_depth(mixed, norm);
    ImageF denorm(8, 8);
    for (size_t i = 0; i < denorm.data.size(); ++i)
        denorm.data[i] = static_cast<float>(norm.d_min + n1.data[i] * (norm.d_max - norm.d_min));
    const ImageF n2 = normalize_depth(denorm, norm);
    for (size_t i = 0; i < n1.data.size(); ++i) CHECK(std::abs(n1.data[i] - n2.data[i]) < 1e-6f);

    CHECK_THROWS_AS(normalize_depth(at_min, NormSpec{1.0, 1.0}), DegenerateAnchors);
}

TEST_CASE("build_samples maps the contact pixel with nearest-neighbor index semantics") {
    const int W = 224, H = 160, out = 112;
    std::vector<ImageF> depths(3, ImageF(W, H, 1.0f));
    std::vector<TrackSample> oracle;
    for (int i = 0; i < 3; ++i) oracle.push_back({i, 150.7, 90.2, true});
    const ContactTrack track = backtrack_contact(oracle, 2, W, H);
    const auto samples = build_samples(depths, track, 0, NormSpec{0.0, 2.0}, 7, SampleParams{});
    REQUIRE(samples.size() == 3);
    const int tx = static_cast<int>(std::floor(150.7 * out / W));
    const int ty = static_cast<int>(std::floor(90.2 * out / H));
    for (const auto& s : samples) {
        int positives = 0;
        for (int y = 0; y < out; ++y)
            for (int x = 0; x < out; ++x)
                if (s.target_map.at(x, y) != 0) {
                    ++positives;
                    CHECK(x == tx);
                    CHECK(y == ty);
                }
        CHECK(positives == 1);
        CHECK(s.episode_id == 7);
        // Constant 1.0 m depth with anchors [0, 2] normalizes to 0.5.
        CHECK(s.depth_current.at(10, 10) == doctest::Approx(0.5f));
        CHECK(s.target_splat.at(tx, ty) == doctest::Approx(1.0f));
    }
}

TEST_CASE("invisible contact frames carry an empty target map") {
    std::vector<ImageF> depths(4, ImageF(64, 64, 1.0f));
    std::vector<TrackSample> oracle;
    for (int i = 0; i < 4; ++i) {
        // First two frames out of the image.
        oracle.push_back({i, i < 2 ? -5.0 : 30.0, 30.0, true});
    }
    const ContactTrack track = backtrack_contact(oracle, 3, 64, 64);
    const auto samples = build_samples(depths, track, 3, NormSpec{0.0, 2.0}, 1, SampleParams{});
    REQUIRE(samples.size() == 4);
    for (int i = 0; i < 4; ++i) {
        int positives = 0;
        for (const auto v : samples[i].target_map.data) positives += v != 0;
        CHECK(positives == (i < 2 ? 0 : 1));
    }
}

TEST_CASE("oracle heatmap peaks at the grasp pixel and integrates like a Gaussian") {
    sim::Observation obs;
    obs.labels = ImageU8(224, 160, 0);
    obs.depth = ImageF(224, 160, 10.0f);
    // A mask patch around the track point so the peak stays anchored on-mask.
    for (int y = 60; y < 80; ++y)
        for (int x = 100; x < 124; ++x) obs.labels.at(x, y) = 1;
    obs.tracks[0] = {112.0, 70.0, true};

    const double sigma = 3.0;
    const ImageF heat = oracle_heatmap(obs, 0, sigma);
    CHECK(heat.at(112, 70) == doctest::Approx(1.0f));
    double sum = 0.0;
    for (const float v : heat.data) sum += v;
    // Discrete Gaussian summation oracle for an interior peak.
    CHECK(sum == doctest::Approx(2.0 * M_PI * sigma * sigma).epsilon(0.05));

    SUBCASE("invisible target gives an all-zero map") {
        obs.tracks[0].visible = false;
        const ImageF zero = oracle_heatmap(obs, 0, sigma);
        for (const float v : zero.data) CHECK(v == 0.0f);
    }
}

TEST_CASE("dataset export round-trips bit-exactly with clean episode splits") {
    const auto out_dir = std::filesystem::temp_directory_path() / "aqua_dataset_test";
    std::filesystem::remove_all(out_dir);

    std::vector<AffordanceSample> samples;
    Rng rng(9);
    for (int ep = 0; ep < 5; ++ep) {
        for (int frame = 0; frame < 3; ++frame) {
            AffordanceSample s;
            s.episode_id = ep;
            s.frame_index = frame;
            s.depth_current = ImageF(16, 16);
            s.depth_goal = ImageF(16, 16);
            for (auto& v : s.depth_current.data) v = static_cast<float>(rng.uniform());
            for (auto& v : s.depth_goal.data) v = static_cast<float>(rng.uniform());
            s.target_map = ImageU8(16, 16, 0);
            s.target_map.at(frame, frame) = 1;
            samples.push_back(std::move(s));
        }
    }
    const DatasetManifest manifest = export_dataset(samples, out_dir.string(), NormSpec{0.0, 1.0}, 0.8, 0.0);
    CHECK(manifest.sample_count == 15);

    // Split hygiene: no id in both lists; 80/20 over five episodes.
    CHECK(manifest.train_episodes.size() == 4);
    CHECK(manifest.val_episodes.size() == 1);
    for (const int id : manifest.train_episodes)
        for (const int vid : manifest.val_episodes) CHECK(id != vid);

    // Bit-exact round trip.
    for (const auto& s : samples) {
        const std::string base =
            out_dir.string() + "/episode_" + std::to_string(s.episode_id) + "/frame_" +
            std::to_string(s.frame_index);
        CHECK(read_dataset_array(base + ".depth", 16) == s.depth_current);
        CHECK(read_dataset_array(base + ".goal", 16) == s.depth_goal);
        const ImageF target = read_dataset_array(base + ".target", 16);
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x)
                CHECK(target.at(x, y) == static_cast<float>(s.target_map.at(x, y)));
    }

    // Manifest parses back and reproduces the checksums.
    const DatasetManifest loaded =
        manifest_from_json(load_json_file(out_dir.string() + "/manifest"), "manifest");
    CHECK(loaded.dataset_checksum == manifest.dataset_checksum);
    CHECK(loaded.checksums == manifest.checksums);

    CHECK_THROWS_AS(export_dataset({}, out_dir.string(), NormSpec{0.0, 1.0}), ConfigError);
    std::filesystem::remove_all(out_dir);
}

TEST_CASE("warped-goal and native-goal target maps agree when the warp is exact") {
    // Cross-domain goal path: build the goal depth via an exact translation
    // warp and check the mapped keypoint lands within a pixel of the native
    // route's keypoint.
    CameraModel cam;
    cam.fx = 80.0;
    cam.fy = 80.0;
    cam.cx = 56.0;
    cam.cy = 40.0;
    cam.width = 112;
    cam.height = 80;

    WarpSpec spec;
    spec.source = cam;
    spec.target = cam;
    spec.translation = Vec3(0.05, 0.0, 0.0);  // 4 px shift at Z=1
    spec.plane_depth = 1.0;

    // Scene on the Z=1 plane: a bright square patch around the keypoint.
    ImageF native(112, 80, 1.0f);
    for (int y = 30; y < 50; ++y)
        for (int x = 40; x < 60; ++x) native.at(x, y) = 0.4f;

    // The source-camera view of the same plane is the native image shifted by
    // +4 px in u; warping it back must reproduce the native geometry.
    ImageF source_view(112, 80, 1.0f);
    for (int y = 0; y < 80; ++y)
        for (int x = 0; x < 112; ++x) {
            const int sx = x - 4;
            if (sx >= 40 && sx < 60 && y >= 30 && y < 50) source_view.at(x, y) = 0.4f;
        }

    const RemapTable table = build_remap_table(spec);
    const ImageF warped = remap_image(table, source_view, 1.0f);

    // Dark-patch centroid of both routes within 1 px.
    const auto patch_centroid = [](const ImageF& img) {
        double su = 0.0, sv = 0.0;
        int count = 0;
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x)
                if (img.at(x, y) < 0.7f) {
                    su += x;
                    sv += y;
                    ++count;
                }
        return std::pair<double, double>{su / count, sv / count};
    };
    const auto [nu, nv] = patch_centroid(native);
    const auto [wu, wv] = patch_centroid(warped);
    CHECK(std::abs(nu - wu) <= 1.0);
    CHECK(std::abs(nv - wv) <= 1.0);
}
