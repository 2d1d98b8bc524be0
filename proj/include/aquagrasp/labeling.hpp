#pragma once

#include <string>
#include <vector>

#include "aquagrasp/image.hpp"
#include "aquagrasp/json_util.hpp"
#include "aquagrasp/render.hpp"

namespace aqua::label {

// Gripper width/aperture time series, normalized to [0, 1].
struct WidthSignal {
    std::vector<double> t;
    std::vector<double> w;
    double sample_rate = 10.0;  // Hz

    void validate() const;
};

struct ClosureParams {
    double window = 0.5;       // s, trailing max window
    double min_drop = 0.3;     // aperture units
    double min_plateau = 1.0;  // s
    double plateau_tol = 0.1;  // peak-to-peak over the plateau
};

struct ClosureEvent {
    double t_star = 0.0;
    size_t index = 0;  // sample index of t_star
    double drop_magnitude = 0.0;
    double plateau_len = 0.0;
};

// Sliding-window change detector: t* is the earliest sample where the drop
// from the trailing-window max reaches min_drop and the subsequent
// min_plateau interval stays within plateau_tol peak-to-peak. Throws
// NoClosureFound when no sample qualifies.
ClosureEvent detect_closure(const WidthSignal& sig, const ClosureParams& params = {});

struct TrackSample {
    int frame = 0;
    double u = 0.0;
    double v = 0.0;
    bool visible = false;
};

// Per-frame contact-pixel track from episode start through t*.
struct ContactTrack {
    std::vector<TrackSample> samples;  // frames 0..t_star_index inclusive
    size_t t_star_index = 0;
};

// Seeds at the tracked contact pixel at t* and reads the track backward to
// frame 0, marking frames where the point leaves the image as invisible.
// Throws SeedOutOfFrame if the anchor pixel is outside the image at t*.
ContactTrack backtrack_contact(const std::vector<TrackSample>& oracle_track, size_t t_star_index,
                               int img_width, int img_height);

// Line-delimited track records {frame, u, v, visible}; the import path for
// externally produced tracker outputs.
std::vector<TrackSample> read_track_file(const std::string& path);
void write_track_file(const std::string& path, const std::vector<TrackSample>& track);

// Dataset-wide anchored depth normalization (with clamping).
struct NormSpec {
    double d_min = 0.0;
    double d_max = 1.0;
};

ImageF normalize_depth(const ImageF& depth, const NormSpec& norm);

struct AffordanceSample {
    ImageF depth_current;  // out_size x out_size, normalized
    ImageF depth_goal;
    ImageU8 target_map;    // one-hot keypoint map
    ImageF target_splat;   // optional Gaussian-splatted variant (empty if disabled)
    int episode_id = 0;
    int frame_index = 0;
};

struct SampleParams {
    int out_size = 112;
    double splat_sigma = 2.0;  // px at out_size; <= 0 disables the splat export
};

// One training tuple per frame t <= t*: bilinear-resized clamped-normalized
// depth, identically processed goal depth, and the contact keypoint mapped
// through the resize with nearest-neighbor semantics. Frames with an
// invisible contact carry an empty target map.
std::vector<AffordanceSample> build_samples(const std::vector<ImageF>& depth_frames,
                                            const ContactTrack& track, int goal_frame,
                                            const NormSpec& norm, int episode_id,
                                            const SampleParams& params = {});

// Deterministic stand-in for the learned affordance predictor: an isotropic
// Gaussian splat on the target's projected grasp point, peak-normalized to 1;
// all-zero when the target is not visible.
ImageF oracle_heatmap(const sim::Observation& obs, int target_id, double splat_sigma);

struct DatasetManifest {
    NormSpec anchors;
    int resolution = 112;
    double splat_sigma = 2.0;
    int sample_count = 0;
    std::vector<int> train_episodes;
    std::vector<int> val_episodes;
    std::map<std::string, uint64_t> checksums;  // relative path -> FNV-1a 64
    uint64_t dataset_checksum = 0;
};

Json manifest_to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const Json& j, const std::string& context);

// Writes episode_<id>/frame_<k>.{depth,goal,target[,target_splat]} float32
// binaries plus the manifest. Episode-wise train/validation split (sorted
// ids, leading fraction to train). Throws on an empty sample list.
DatasetManifest export_dataset(const std::vector<AffordanceSample>& samples, const std::string& out_dir,
                               const NormSpec& anchors, double train_fraction = 0.8,
                               double splat_sigma = 2.0);

// Reads one exported float32 array back (round-trip checks, downstream use).
ImageF read_dataset_array(const std::string& path, int resolution);

}  // namespace aqua::label
