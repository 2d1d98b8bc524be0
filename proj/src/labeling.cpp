#include "aquagrasp/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <filesystem>
#include <fstream>
#include <set>

#include "aquagrasp/io.hpp"

namespace aqua::label {

void WidthSignal::validate() const {
    if (t.size() != w.size()) throw ConfigError("WidthSignal: t and w lengths differ");
    for (size_t i = 1; i < t.size(); ++i)
        if (t[i] <= t[i - 1]) throw ConfigError("WidthSignal: timestamps must be strictly increasing");
    for (const double v : w)
        if (v < 0.0 || v > 1.0) throw ConfigError("WidthSignal: aperture outside [0, 1]");
}

ClosureEvent detect_closure(const WidthSignal& sig, const ClosureParams& params) {
    sig.validate();
    const size_t n = sig.w.size();
    const auto window_n = static_cast<size_t>(std::llround(params.window * sig.sample_rate));
    const auto plateau_n = static_cast<size_t>(std::llround(params.min_plateau * sig.sample_rate));
    if (n < window_n + plateau_n + 1)
        throw NoClosureFound("detect_closure: signal shorter than window + plateau");

    // Trailing-window running max via a monotonic deque (streaming form; the
    // tests hold this equal to the exhaustive scan).
    std::deque<size_t> maxq;
    for (size_t i = 0; i < n; ++i) {
        while (!maxq.empty() && sig.w[maxq.back()] <= sig.w[i]) maxq.pop_back();
        maxq.push_back(i);
        while (maxq.front() + window_n < i) maxq.pop_front();

        const double drop = sig.w[maxq.front()] - sig.w[i];
        if (drop < params.min_drop) continue;
        if (i + plateau_n >= n) break;  // plateau would run past the signal
        double lo = sig.w[i], hi = sig.w[i];
        for (size_t k = i; k <= i + plateau_n; ++k) {
            lo = std::min(lo, sig.w[k]);
            hi = std::max(hi, sig.w[k]);
        }
        if (hi - lo <= params.plateau_tol) {
            ClosureEvent ev;
            ev.t_star = sig.t[i];
            ev.index = i;
            ev.drop_magnitude = drop;
            ev.plateau_len = params.min_plateau;
            return ev;
        }
    }
    throw NoClosureFound("detect_closure: no qualifying drop-then-plateau found");
}

ContactTrack backtrack_contact(const std::vector<TrackSample>& oracle_track, size_t t_star_index,
                               int img_width, int img_height) {
    if (t_star_index >= oracle_track.size())
        throw ConfigError("backtrack_contact: t_star index beyond the track");
    const TrackSample& anchor = oracle_track[t_star_index];
    const auto in_frame = [&](const TrackSample& s) {
        return s.u >= 0.0 && s.u < img_width && s.v >= 0.0 && s.v < img_height;
    };
    if (!in_frame(anchor) || !anchor.visible)
        throw SeedOutOfFrame("backtrack_contact: contact pixel outside the image at t*");

    ContactTrack track;
    track.t_star_index = t_star_index;
    track.samples.resize(t_star_index + 1);
    for (size_t i = 0; i <= t_star_index; ++i) {
        // Read backward from the seed, though the stored layout stays
        // chronological for downstream consumers.
        const size_t idx = t_star_index - i;
        TrackSample s = oracle_track[idx];
        s.visible = s.visible && in_frame(s);
        track.samples[idx] = s;
    }
    return track;
}

std::vector<TrackSample> read_track_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::vector<TrackSample> track;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::exception& e) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        const std::string ctx = path + ":" + std::to_string(line_no);
        TrackSample s;
        s.frame = get_as<int>(j, "frame", ctx);
        s.u = get_as<double>(j, "u", ctx);
        s.v = get_as<double>(j, "v", ctx);
        s.visible = get_as<bool>(j, "visible", ctx);
        track.push_back(s);
    }
    return track;
}

void write_track_file(const std::string& path, const std::vector<TrackSample>& track) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    for (const auto& s : track)
        out << Json{{"frame", s.frame}, {"u", s.u}, {"v", s.v}, {"visible", s.visible}}.dump() << "\n";
    if (!out) throw IoError("failed writing '" + path + "'");
}

ImageF normalize_depth(const ImageF& depth, const NormSpec& norm) {
    if (norm.d_max - norm.d_min < 1e-6)
        throw DegenerateAnchors("normalize_depth: d_max - d_min below 1e-6");
    ImageF out(depth.width, depth.height);
    const float lo = static_cast<float>(norm.d_min);
    const float inv = static_cast<float>(1.0 / (norm.d_max - norm.d_min));
    for (size_t i = 0; i < depth.data.size(); ++i)
        out.data[i] = std::clamp((depth.data[i] - lo) * inv, 0.0f, 1.0f);
    return out;
}

namespace {

ImageF splat_gaussian(int size, double cu, double cv, double sigma) {
    ImageF out(size, size, 0.0f);
    double peak = 0.0;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double du = x - cu;
            const double dv = y - cv;
            const double val = std::exp(-(du * du + dv * dv) / (2.0 * sigma * sigma));
            out.at(x, y) = static_cast<float>(val);
            peak = std::max(peak, val);
        }
    }
    if (peak > 0.0)
        for (auto& v : out.data) v = static_cast<float>(v / peak);
    return out;
}

}  // namespace

std::vector<AffordanceSample> build_samples(const std::vector<ImageF>& depth_frames,
                                            const ContactTrack& track, int goal_frame,
                                            const NormSpec& norm, int episode_id,
                                            const SampleParams& params) {
    if (depth_frames.empty()) throw ConfigError("build_samples: no depth frames");
    if (goal_frame < 0 || goal_frame >= static_cast<int>(depth_frames.size()))
        throw ConfigError("build_samples: goal frame outside the episode");
    if (track.samples.size() > depth_frames.size())
        throw ConfigError("build_samples: track longer than the depth sequence");

    const int size = params.out_size;
    const ImageF goal = normalize_depth(resize_bilinear(depth_frames[goal_frame], size, size), norm);
    const int src_w = depth_frames[0].width;
    const int src_h = depth_frames[0].height;

    std::vector<AffordanceSample> samples;
    samples.reserve(track.samples.size());
    for (size_t i = 0; i < track.samples.size(); ++i) {
        AffordanceSample s;
        s.episode_id = episode_id;
        s.frame_index = static_cast<int>(i);
        s.depth_current = normalize_depth(resize_bilinear(depth_frames[i], size, size), norm);
        s.depth_goal = goal;
        s.target_map = ImageU8(size, size, 0);
        const TrackSample& ts = track.samples[i];
        if (ts.visible) {
            // Nearest-neighbor index mapping into the resized grid.
            const int tx = std::clamp(static_cast<int>(std::floor(ts.u * size / src_w)), 0, size - 1);
            const int ty = std::clamp(static_cast<int>(std::floor(ts.v * size / src_h)), 0, size - 1);
            s.target_map.at(tx, ty) = 1;
            if (params.splat_sigma > 0.0)
                s.target_splat = splat_gaussian(size, tx, ty, params.splat_sigma);
        } else if (params.splat_sigma > 0.0) {
            s.target_splat = ImageF(size, size, 0.0f);
        }
        samples.push_back(std::move(s));
    }
    return samples;
}

ImageF oracle_heatmap(const sim::Observation& obs, int target_id, double splat_sigma) {
    ImageF out(obs.labels.width, obs.labels.height, 0.0f);
    const auto it = obs.tracks.find(target_id);
    if (it == obs.tracks.end() || !it->second.visible) return out;
    double cu = it->second.u;
    double cv = it->second.v;
    // A surface grasp point can round off its own mask (tangent rays, partial
    // occlusion). The predictor's peak is by definition on the object, so
    // re-anchor to the target's nearest mask pixel when that happens.
    const uint8_t code = static_cast<uint8_t>(target_id + 1);
    const int px = std::clamp(static_cast<int>(std::lround(cu)), 0, obs.labels.width - 1);
    const int py = std::clamp(static_cast<int>(std::lround(cv)), 0, obs.labels.height - 1);
    if (obs.labels.at(px, py) != code) {
        double best = std::numeric_limits<double>::max();
        int bx = -1, by = -1;
        for (int y = 0; y < obs.labels.height; ++y) {
            for (int x = 0; x < obs.labels.width; ++x) {
                if (obs.labels.at(x, y) != code) continue;
                const double d = (x - cu) * (x - cu) + (y - cv) * (y - cv);
                if (d < best) {
                    best = d;
                    bx = x;
                    by = y;
                }
            }
        }
        if (bx < 0) return out;  // mask empty this frame
        cu = bx;
        cv = by;
    }
    double peak = 0.0;
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            const double du = x - cu;
            const double dv = y - cv;
            const double val = std::exp(-(du * du + dv * dv) / (2.0 * splat_sigma * splat_sigma));
            out.at(x, y) = static_cast<float>(val);
            peak = std::max(peak, val);
        }
    }
    if (peak > 0.0)
        for (auto& v : out.data) v = static_cast<float>(v / peak);
    return out;
}

Json manifest_to_json(const DatasetManifest& m) {
    Json checksums = Json::object();
    for (const auto& [path, sum] : m.checksums) checksums[path] = sum;
    return Json{{"anchors", {{"d_min", m.anchors.d_min}, {"d_max", m.anchors.d_max}}},
                {"resolution", m.resolution},
                {"splat_sigma", m.splat_sigma},
                {"sample_count", m.sample_count},
                {"train_episodes", m.train_episodes},
                {"val_episodes", m.val_episodes},
                {"checksums", checksums},
                {"dataset_checksum", m.dataset_checksum}};
}

DatasetManifest manifest_from_json(const Json& j, const std::string& context) {
    DatasetManifest m;
    const Json& anchors = require_key(j, "anchors", context);
    m.anchors.d_min = get_as<double>(anchors, "d_min", context + ".anchors");
    m.anchors.d_max = get_as<double>(anchors, "d_max", context + ".anchors");
    m.resolution = get_as<int>(j, "resolution", context);
    m.splat_sigma = get_as<double>(j, "splat_sigma", context);
    m.sample_count = get_as<int>(j, "sample_count", context);
    m.train_episodes = get_as<std::vector<int>>(j, "train_episodes", context);
    m.val_episodes = get_as<std::vector<int>>(j, "val_episodes", context);
    for (const auto& [path, sum] : require_key(j, "checksums", context).items())
        m.checksums[path] = sum.get<uint64_t>();
    m.dataset_checksum = get_as<uint64_t>(j, "dataset_checksum", context);
    return m;
}

namespace {

void write_array_f32(const std::string& path, const float* data, size_t n) {
    write_file_bytes(path, data, n * sizeof(float));
}

}  // namespace

DatasetManifest export_dataset(const std::vector<AffordanceSample>& samples, const std::string& out_dir,
                               const NormSpec& anchors, double train_fraction, double splat_sigma) {
    if (samples.empty()) throw ConfigError("export_dataset: empty sample list");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);

    DatasetManifest manifest;
    manifest.anchors = anchors;
    manifest.resolution = samples[0].depth_current.width;
    manifest.splat_sigma = splat_sigma;
    manifest.sample_count = static_cast<int>(samples.size());

    std::set<int> episode_ids;
    for (const auto& s : samples) episode_ids.insert(s.episode_id);

    for (const auto& s : samples) {
        const std::string ep_dir = out_dir + "/episode_" + std::to_string(s.episode_id);
        std::filesystem::create_directories(ep_dir);
        const std::string base = ep_dir + "/frame_" + std::to_string(s.frame_index);
        write_array_f32(base + ".depth", s.depth_current.data.data(), s.depth_current.data.size());
        write_array_f32(base + ".goal", s.depth_goal.data.data(), s.depth_goal.data.size());
        std::vector<float> target(s.target_map.data.size());
        for (size_t i = 0; i < target.size(); ++i) target[i] = static_cast<float>(s.target_map.data[i]);
        write_array_f32(base + ".target", target.data(), target.size());
        if (!s.target_splat.data.empty())
            write_array_f32(base + ".target_splat", s.target_splat.data.data(), s.target_splat.data.size());
    }

    // Episode-wise split: sorted ids, leading fraction to train.
    const std::vector<int> ids(episode_ids.begin(), episode_ids.end());
    const auto n_train = static_cast<size_t>(std::ceil(train_fraction * static_cast<double>(ids.size())));
    for (size_t i = 0; i < ids.size(); ++i)
        (i < n_train ? manifest.train_episodes : manifest.val_episodes).push_back(ids[i]);

    // Per-file checksums plus a dataset-level digest over them.
    for (const auto& s : samples) {
        const std::string rel_base =
            "episode_" + std::to_string(s.episode_id) + "/frame_" + std::to_string(s.frame_index);
        for (const char* ext : {".depth", ".goal", ".target", ".target_splat"}) {
            const std::string rel = rel_base + ext;
            const std::string full = out_dir + "/" + rel;
            if (!std::filesystem::exists(full)) continue;
            manifest.checksums[rel] = fnv1a64_file(full);
        }
    }
    uint64_t digest = 0xcbf29ce484222325ull;
    for (const auto& [rel, sum] : manifest.checksums) {
        digest = fnv1a64(rel.data(), rel.size()) ^ (digest * 0x100000001b3ull);
        digest ^= sum;
    }
    manifest.dataset_checksum = digest;

    save_json_file(out_dir + "/manifest", manifest_to_json(manifest));
    return manifest;
}

ImageF read_dataset_array(const std::string& path, int resolution) {
    const auto bytes = read_file_bytes(path);
    if (bytes.size() != static_cast<size_t>(resolution) * resolution * sizeof(float))
        throw IoError(path + ": unexpected array size");
    ImageF img(resolution, resolution);
    std::memcpy(img.data.data(), bytes.data(), bytes.size());
    return img;
}

}  // namespace aqua::label
