#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "aquagrasp/harness.hpp"
#include "aquagrasp/io.hpp"
#include "aquagrasp/suites.hpp"
#include "aquagrasp/warp.hpp"

namespace {

// Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 no closure
// found. Everything else maps to 1.
constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNoClosure = 4;

int log_level() {
    const char* env = std::getenv("AQUAGRASP_LOG");
    if (env == nullptr) return 1;
    const std::string v(env);
    if (v == "quiet" || v == "0") return 0;
    if (v == "debug" || v == "2") return 2;
    return 1;
}

int run_collect(const std::string& spec_path, long long seed_override, int jobs_override,
                const std::string& out_dir) {
    aqua::harness::CampaignSpec spec = aqua::harness::load_campaign_spec(spec_path);
    if (seed_override >= 0) spec.seed_base = static_cast<uint64_t>(seed_override);
    if (jobs_override > 0) spec.jobs = jobs_override;
    if (!out_dir.empty()) spec.out_dir = out_dir;
    const aqua::harness::CampaignReport report = aqua::harness::run_campaign(spec);
    if (log_level() > 0) std::fputs(aqua::harness::report_summary(report).c_str(), stdout);
    return kExitOk;
}

int run_warp(const std::string& calib_path, const std::string& in_path, const std::string& out_path,
             bool depth_mode, bool nearest, const std::string& cache_path) {
    const aqua::WarpSpec spec = aqua::load_warp_spec(calib_path);
    aqua::RemapTable table;
    if (!cache_path.empty() && std::filesystem::exists(cache_path)) {
        table = aqua::load_remap_table(cache_path);
        if (table.width != spec.target.width || table.height != spec.target.height)
            throw aqua::ConfigError(cache_path + ": cached table resolution does not match the calibration");
        table.src_width = spec.source.width;
        table.src_height = spec.source.height;
    } else {
        table = aqua::build_remap_table(spec);
        if (!cache_path.empty()) aqua::save_remap_table(cache_path, table);
    }

    const aqua::SampleMode mode = nearest ? aqua::SampleMode::Nearest : aqua::SampleMode::Bilinear;
    if (depth_mode) {
        const aqua::ImageF img = aqua::read_float_frame(in_path);
        aqua::write_float_frame(out_path, aqua::remap_image(table, img, 0.0f, mode));
    } else {
        const aqua::ImageU8 in8 = aqua::read_pgm(in_path);
        aqua::ImageF img(in8.width, in8.height);
        for (size_t i = 0; i < in8.data.size(); ++i) img.data[i] = static_cast<float>(in8.data[i]);
        const aqua::ImageF warped = aqua::remap_image(table, img, 0.0f, mode);
        aqua::ImageU8 out8(warped.width, warped.height);
        for (size_t i = 0; i < warped.data.size(); ++i)
            out8.data[i] = static_cast<uint8_t>(std::clamp(warped.data[i], 0.0f, 255.0f) + 0.5f);
        aqua::write_pgm(out_path, out8);
    }
    if (log_level() > 0) std::printf("warped %s -> %s\n", in_path.c_str(), out_path.c_str());
    return kExitOk;
}

int run_label(const std::string& episode_dir, const std::string& out_dir,
              const std::string& track_file) {
    aqua::harness::LabelOptions options;
    options.track_file = track_file;
    const aqua::label::DatasetManifest manifest =
        aqua::harness::label_episode_dir(episode_dir, out_dir, options);
    if (log_level() > 0)
        std::printf("labeled %s: %d samples, checksum %llu\n", episode_dir.c_str(), manifest.sample_count,
                    static_cast<unsigned long long>(manifest.dataset_checksum));
    return kExitOk;
}

int run_suite(const std::string& name, const std::string& out_dir, int jobs, int n_episodes) {
    const aqua::harness::SuiteResult result =
        aqua::harness::experiment_suite(name, out_dir, jobs, n_episodes);
    if (log_level() > 0) {
        std::printf("suite %s\n", result.name.c_str());
        for (const auto& arm : result.arms)
            std::printf("  %-14s %s", arm.name.c_str(),
                        aqua::harness::report_summary(arm.report).c_str());
        std::printf("summary: %s\n", result.summary.dump().c_str());
    }
    return kExitOk;
}

int run_replay(const std::string& record_dir, const std::string& out_dir) {
    const int frames = aqua::harness::replay(record_dir, out_dir);
    if (log_level() > 0) std::printf("replayed %d frames -> %s\n", frames, out_dir.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"aquagrasp: seeded underwater grasp collection simulator and tooling"};
    app.require_subcommand(1);

    std::string spec_path, out_dir, calib_path, in_path, out_path, cache_path, episode_dir, record_dir,
        suite_name, track_file;
    long long seed_override = -1;
    int jobs = 0, n_episodes = 0;
    bool depth_mode = false, nearest = false;

    CLI::App* collect = app.add_subcommand("collect", "run a collection campaign from a spec file");
    collect->add_option("--spec", spec_path, "campaign spec JSON")->required();
    collect->add_option("--seed", seed_override, "override the campaign seed base");
    collect->add_option("--jobs", jobs, "worker threads");
    collect->add_option("--out", out_dir, "output directory")->required();

    CLI::App* warp = app.add_subcommand("warp", "plane-at-depth cross-camera warp of one image");
    warp->add_option("--calib", calib_path, "calibration JSON (two cameras + R, t, Z)")->required();
    warp->add_option("--in", in_path, "input image (PGM, or float32 frame with --depth)")->required();
    warp->add_option("--out", out_path, "output image path")->required();
    warp->add_flag("--depth", depth_mode, "treat input as a float32 depth frame");
    warp->add_flag("--nearest", nearest, "nearest-neighbor sampling instead of bilinear");
    warp->add_option("--cache", cache_path, "remap-table cache path (built if absent)");

    CLI::App* label = app.add_subcommand("label", "closure detection + contact backtracking + export");
    label->add_option("--episode", episode_dir, "episode directory (record.json + frames)")->required();
    label->add_option("--out", out_dir, "dataset output directory")->required();
    label->add_option("--tracks", track_file, "substitute an imported point-track file (JSONL)");

    CLI::App* suite = app.add_subcommand("suite", "run a named experiment suite");
    suite->add_option("--name", suite_name, "suite name")->required();
    suite->add_option("--out", out_dir, "output directory")->required();
    suite->add_option("--jobs", jobs, "worker threads");
    suite->add_option("--episodes", n_episodes, "override episodes per arm");

    CLI::App* replay = app.add_subcommand("replay", "emit error CSV and overlays from a record");
    replay->add_option("--record", record_dir, "episode record directory")->required();
    replay->add_option("--out", out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (collect->parsed()) return run_collect(spec_path, seed_override, jobs, out_dir);
        if (warp->parsed()) return run_warp(calib_path, in_path, out_path, depth_mode, nearest, cache_path);
        if (label->parsed()) return run_label(episode_dir, out_dir, track_file);
        if (suite->parsed()) return run_suite(suite_name, out_dir, jobs, n_episodes);
        if (replay->parsed()) return run_replay(record_dir, out_dir);
    } catch (const aqua::NoClosureFound& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNoClosure;
    } catch (const aqua::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const aqua::UnknownSuite& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const aqua::InvalidDepth& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const aqua::MissingFrameData& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const aqua::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fatal: %s\n", e.what());
        return kExitFatal;
    }
    return kExitConfig;
}
