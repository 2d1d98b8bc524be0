#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "aquagrasp/controller.hpp"
#include "aquagrasp/json_util.hpp"

namespace aqua::harness {

using ctl::FailureReason;

struct ObjectTrackRecord {
    int id = -1;
    double u = 0.0;
    double v = 0.0;
    bool visible = false;

    bool operator==(const ObjectTrackRecord&) const = default;
};

struct ObjectPoseRecord {
    int id = -1;
    double x = 0.0, y = 0.0, z = 0.0, yaw = 0.0;

    bool operator==(const ObjectPoseRecord&) const = default;
};

// One 10 Hz frame: the last-value bucket of the 100 Hz inner loop.
struct FrameRecord {
    double t = 0.0;
    std::string stage;
    std::array<double, 6> action{};  // [yaw, forward, vertical, lateral, open, close]
    // Proprio + gripper.
    double compass = 0.0;
    double pitch = 0.0;
    double vehicle_depth = 0.0;
    double gripper_aperture = 1.0;
    std::optional<int> held_object;
    // Perception-derived signals for replay.
    int target_id = -1;
    bool centroid_valid = false;
    double centroid_u = 0.0;
    double centroid_v = 0.0;
    double error_u = 0.0;
    double error_v = 0.0;
    double yaw_d_filt = 0.0;
    double min_depth = 0.0;
    bool min_depth_valid = false;
    // Ground truth for independent reprojection checks.
    std::array<double, 4> rov_pose{};  // x, y, z, yaw
    std::vector<ObjectPoseRecord> object_poses;
    // Point-track oracle (projected grasp points), per object.
    std::vector<ObjectTrackRecord> tracks;
    // Optional dumped frames (empty when frame saving is off).
    std::string depth_ref;
    std::string mask_ref;

    bool operator==(const FrameRecord&) const = default;

    const ObjectTrackRecord* track_of(int id) const {
        for (const auto& tr : tracks)
            if (tr.id == id) return &tr;
        return nullptr;
    }
    const ObjectPoseRecord* pose_of(int id) const {
        for (const auto& p : object_poses)
            if (p.id == id) return &p;
        return nullptr;
    }
};

struct EventRecord {
    double t = 0.0;
    std::string kind;
    Json data;

    bool operator==(const EventRecord&) const = default;
};

struct TransitionRecord {
    double t = 0.0;
    std::string from;
    std::string to;
    std::string reason;

    bool operator==(const TransitionRecord&) const = default;
};

struct EpisodeRecord {
    int64_t episode_id = 0;
    uint64_t seed = 0;
    std::string scenario_name;
    std::string mode;  // center_bias | affordance
    bool success = false;
    std::string failure_reason;  // "none" on success
    double duration = 0.0;       // s, sim time
    int first_target = -1;
    int goal_target = -1;     // the specified target (recorded in both modes)
    int grasped_object = -1;  // last captured object; -1 if never captured
    int regrasp_count = 0;
    int backup_count = 0;
    Json scenario_cfg;    // the configs the episode ran with, for replay
    Json controller_cfg;
    std::vector<FrameRecord> frames;
    std::vector<EventRecord> events;
    std::vector<TransitionRecord> stage_trace;

    bool operator==(const EpisodeRecord&) const = default;

    // Width signal (t, aperture) at the 10 Hz frame rate.
    std::vector<std::pair<double, double>> width_signal() const;
};

Json episode_to_json(const EpisodeRecord& rec);
EpisodeRecord episode_from_json(const Json& j, const std::string& context);

// Directory layout: <dir>/record.json plus frames/depth_XXXXXX.bin(+.json)
// and frames/mask_XXXXXX.png when frame dumps are enabled.
void save_episode(const std::string& dir, const EpisodeRecord& rec);
EpisodeRecord load_episode(const std::string& dir);

}  // namespace aqua::harness
