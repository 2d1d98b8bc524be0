#pragma once

#include <map>

#include "aquagrasp/sim.hpp"

namespace aqua::sim {

enum class CameraId { Forward, Top };

struct TrackPoint {
    double u = 0.0;
    double v = 0.0;
    bool visible = false;
};

// Per-object view statistics derived from the label image.
struct ObjectView {
    int id = -1;
    int pixel_count = 0;
    double centroid_u = 0.0;
    double centroid_v = 0.0;
    double min_depth = 0.0;  // camera-frame z over the object's mask
};

struct Proprio {
    double compass = 0.0;  // yaw, rad
    double pitch = 0.0;
    double vehicle_depth = 0.0;
};

struct Observation {
    double timestamp = 0.0;
    ImageF depth;        // metric z-depth; background pixels carry the far-plane value
    ImageU8 labels;      // 0 = background, otherwise object id + 1
    std::vector<ObjectView> views;        // visible objects only
    std::map<int, TrackPoint> tracks;     // object id -> projected grasp-point pixel
    Proprio proprio;
    double gripper_aperture = 1.0;
    std::optional<int> held_object;
    ImageF intensity;    // optional synthetic shading (empty unless requested)

    const ObjectView* view_of(int id) const {
        for (const auto& v : views)
            if (v.id == id) return &v;
        return nullptr;
    }

    // Boolean mask of one object, derived from the label image.
    ImageU8 mask(int id) const;
};

struct RenderOptions {
    double depth_noise_sigma = 0.0;
    bool with_intensity = false;
};

// Oracle renderer: analytic ray casts against each object's primitives,
// restricted to the object's projected bounding rectangle. Produces metric
// depth, disjoint per-object masks (nearest surface wins), and per-object
// grasp-point tracks with occlusion-aware visibility.
Observation render(const PoolWorld& world, const RovState& rov, const ScenarioConfig& scenario,
                   CameraId which, Rng* noise_rng = nullptr, const RenderOptions& options = {});

// Camera-frame z-depth of a world point for occlusion tests and track export.
double camera_depth(const CameraPose& pose, const Vec3& world_point);

}  // namespace aqua::sim
