#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "aquagrasp/io.hpp"
#include "aquagrasp/json_util.hpp"

#ifndef AQUA_CLI_PATH
#error "AQUA_CLI_PATH must point at the aquagrasp binary"
#endif
#ifndef AQUA_CONFIG_DIR
#error "AQUA_CONFIG_DIR must point at the shipped configs"
#endif

using namespace aqua;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(AQUA_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string write_campaign_spec(const fs::path& dir, int n, uint64_t seed, bool empty_scene,
                                bool save_frames) {
    Json scenario;
    scenario["objects"] = Json::array();
    if (!empty_scene)
        scenario["objects"].push_back(Json{{"shape", "rock"}, {"graspability", 1.0}});
    const Json spec{{"n_episodes", n},
                    {"seed_base", seed},
                    {"scenario", scenario},
                    {"controller", Json::object()},
                    {"save_frames", save_frames},
                    {"jobs", 1}};
    const std::string path = (dir / "spec.json").string();
    save_json_file(path, spec);
    return path;
}

}  // namespace

TEST_CASE("collect runs a campaign and is deterministic under a fixed seed") {
    TempDir dir("aqua_cli_collect");
    const std::string spec = write_campaign_spec(dir.path, 2, 17, false, false);
    CHECK(run_cli("collect --spec " + spec + " --out " + dir.str() + "/a") == 0);
    CHECK(run_cli("collect --spec " + spec + " --out " + dir.str() + "/b") == 0);
    CHECK(fnv1a64_file(dir.str() + "/a/report.json") == fnv1a64_file(dir.str() + "/b/report.json"));
    CHECK(fnv1a64_file(dir.str() + "/a/episode_0/record.json") ==
          fnv1a64_file(dir.str() + "/b/episode_0/record.json"));

    // A seed override changes the outcome stream but still succeeds.
    CHECK(run_cli("collect --spec " + spec + " --seed 9001 --out " + dir.str() + "/c") == 0);
    const Json a = load_json_file(dir.str() + "/a/episode_0/record.json");
    const Json c = load_json_file(dir.str() + "/c/episode_0/record.json");
    CHECK(a["seed"] != c["seed"]);
}

TEST_CASE("collect with a missing spec file exits 2 and names the path") {
    TempDir cap("aqua_cli_stderr");
    const std::string err_file = cap.str() + "/err.txt";
    const int status = std::system((std::string(AQUA_CLI_PATH) +
                                    " collect --spec /definitely/not/here.json --out /tmp/aqua_never"
                                    " >/dev/null 2>" +
                                    err_file)
                                       .c_str());
    CHECK(WEXITSTATUS(status) == 2);
    std::ifstream err(err_file);
    std::string message((std::istreambuf_iterator<char>(err)), std::istreambuf_iterator<char>());
    CHECK(message.find("/definitely/not/here.json") != std::string::npos);
    // Malformed JSON is a configuration error.
    TempDir dir("aqua_cli_badspec");
    std::ofstream bad(dir.path / "bad.json");
    bad << "{ not json";
    bad.close();
    CHECK(run_cli("collect --spec " + (dir.path / "bad.json").string() + " --out " + dir.str()) == 2);
}

TEST_CASE("warp identity reproduces the input image bit-exactly, cached or not") {
    TempDir dir("aqua_cli_warp");
    ImageU8 img(224, 160);
    for (int y = 0; y < 160; ++y)
        for (int x = 0; x < 224; ++x) img.at(x, y) = static_cast<uint8_t>((x * 3 + y * 5) % 251);
    const std::string in = dir.str() + "/in.pgm";
    write_pgm(in, img);
    const std::string calib = std::string(AQUA_CONFIG_DIR) + "/calibration_identity.json";

    CHECK(run_cli("warp --calib " + calib + " --in " + in + " --out " + dir.str() + "/out1.pgm") == 0);
    CHECK(fnv1a64_file(in) == fnv1a64_file(dir.str() + "/out1.pgm"));

    const std::string cache = dir.str() + "/table.aqrt";
    CHECK(run_cli("warp --calib " + calib + " --in " + in + " --out " + dir.str() + "/out2.pgm --cache " +
                  cache) == 0);
    CHECK(fs::exists(cache));
    CHECK(run_cli("warp --calib " + calib + " --in " + in + " --out " + dir.str() + "/out3.pgm --cache " +
                  cache) == 0);
    CHECK(fnv1a64_file(dir.str() + "/out2.pgm") == fnv1a64_file(dir.str() + "/out3.pgm"));
    CHECK(fnv1a64_file(dir.str() + "/out2.pgm") == fnv1a64_file(dir.str() + "/out1.pgm"));
}

TEST_CASE("warp --depth round-trips float32 frames through the identity calibration") {
    TempDir dir("aqua_cli_warp_depth");
    ImageF depth(224, 160);
    for (int y = 0; y < 160; ++y)
        for (int x = 0; x < 224; ++x) depth.at(x, y) = 0.5f + 0.01f * x + 0.002f * y;
    const std::string in = dir.str() + "/in.bin";
    write_float_frame(in, depth);
    const std::string calib = std::string(AQUA_CONFIG_DIR) + "/calibration_identity.json";
    CHECK(run_cli("warp --depth --calib " + calib + " --in " + in + " --out " + dir.str() + "/out.bin") ==
          0);
    const ImageF out = read_float_frame(dir.str() + "/out.bin");
    CHECK(out == depth);
}

TEST_CASE("warp error paths use the documented exit codes") {
    TempDir dir("aqua_cli_warp_err");
    const std::string calib = std::string(AQUA_CONFIG_DIR) + "/calibration_identity.json";
    // Nonexistent input image: I/O error.
    CHECK(run_cli("warp --calib " + calib + " --in " + dir.str() + "/nope.pgm --out " + dir.str() +
                  "/o.pgm") == 3);
    // Broken calibration: configuration error naming the key.
    Json bad = load_json_file(calib);
    bad.erase("plane_depth");
    save_json_file(dir.str() + "/bad_calib.json", bad);
    CHECK(run_cli("warp --calib " + dir.str() + "/bad_calib.json --in " + dir.str() + "/nope.pgm --out " +
                  dir.str() + "/o.pgm") == 2);
}

TEST_CASE("label emits the dataset for closures and exit 4 without one") {
    TempDir dir("aqua_cli_label");
    const std::string spec = write_campaign_spec(dir.path, 1, 44, false, true);
    REQUIRE(run_cli("collect --spec " + spec + " --out " + dir.str() + "/camp") == 0);
    CHECK(run_cli("label --episode " + dir.str() + "/camp/episode_0 --out " + dir.str() + "/ds") == 0);
    CHECK(fs::exists(dir.path / "ds" / "manifest"));

    // Rerunning produces identical dataset checksums.
    CHECK(run_cli("label --episode " + dir.str() + "/camp/episode_0 --out " + dir.str() + "/ds2") == 0);
    const Json m1 = load_json_file(dir.str() + "/ds/manifest");
    const Json m2 = load_json_file(dir.str() + "/ds2/manifest");
    CHECK(m1["dataset_checksum"] == m2["dataset_checksum"]);

    // An empty-scene episode never closes the gripper: no closure, exit 4.
    const std::string empty_spec = write_campaign_spec(dir.path, 1, 1, true, true);
    REQUIRE(run_cli("collect --spec " + empty_spec + " --out " + dir.str() + "/empty") == 0);
    CHECK(run_cli("label --episode " + dir.str() + "/empty/episode_0 --out " + dir.str() + "/ds3") == 4);
}

TEST_CASE("suite dispatch: unknown names exit 2, reruns are identical") {
    CHECK(run_cli("suite --name no_such_suite --out /tmp/aqua_never") == 2);

    TempDir dir("aqua_cli_suite");
    CHECK(run_cli("suite --name recovery_ablation --episodes 4 --jobs 2 --out " + dir.str() + "/s1") == 0);
    CHECK(run_cli("suite --name recovery_ablation --episodes 4 --jobs 2 --out " + dir.str() + "/s2") == 0);
    CHECK(fnv1a64_file(dir.str() + "/s1/suite_summary.json") ==
          fnv1a64_file(dir.str() + "/s2/suite_summary.json"));
}

TEST_CASE("replay works on recorded episodes and fails cleanly otherwise") {
    TempDir dir("aqua_cli_replay");
    const std::string spec = write_campaign_spec(dir.path, 1, 21, false, true);
    REQUIRE(run_cli("collect --spec " + spec + " --out " + dir.str() + "/camp") == 0);
    CHECK(run_cli("replay --record " + dir.str() + "/camp/episode_0 --out " + dir.str() + "/rp") == 0);
    CHECK(fs::exists(dir.path / "rp" / "errors.csv"));
    CHECK(run_cli("replay --record " + dir.str() + "/camp/episode_9 --out " + dir.str() + "/rp2") == 3);
}

TEST_CASE("unknown flags are rejected as errors") {
    CHECK(run_cli("collect --spec x --out y --frobnicate") == 2);
    CHECK(run_cli("") == 2);  // a subcommand is required
}
