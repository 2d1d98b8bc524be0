#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aquagrasp/camera.hpp"
#include "aquagrasp/image.hpp"
#include "aquagrasp/json_util.hpp"
#include "aquagrasp/rng.hpp"

namespace aqua::sim {

using aqua::Json;
using aqua::Mat3;
using aqua::Rng;
using aqua::Vec2;
using aqua::Vec3;

// World frame: x along the pool length, y across, z up with the water
// surface at z = 0 (the floor sits at z = -depth). Body frame: x forward,
// y left, z up; yaw is CCW about world +z.

enum class ShapeKind { Rock, Seagrass, Duck, Pitcher, Can, Drill };

ShapeKind shape_from_string(const std::string& name);
std::string shape_to_string(ShapeKind kind);

// Primitive solids composed into object shapes. Positions are in the object
// body frame whose origin is the floor-contact point.
struct Primitive {
    enum class Type { Sphere, Capsule, Box } type = Type::Sphere;
    Vec3 a = Vec3::Zero();      // sphere/box center, capsule endpoint A
    Vec3 b = Vec3::Zero();      // capsule endpoint B, box half-extents
    double radius = 0.0;        // sphere/capsule
};

struct ObjectShape {
    std::vector<Primitive> prims;
    Vec3 grasp_point = Vec3::Zero();  // body frame, on the surface
    Vec3 centroid = Vec3::Zero();     // body frame
    double bound_radius = 0.0;        // sphere around `centroid` covering all prims
};

ObjectShape make_shape(ShapeKind kind, double scale = 1.0);

struct ObjectInstance {
    int id = 0;
    ShapeKind kind = ShapeKind::Rock;
    double scale = 1.0;
    double graspability = 1.0;  // (0, 1]; 1 = never slips
    Vec3 position = Vec3::Zero();  // world position of the body origin
    double yaw = 0.0;
    ObjectShape shape;

    Vec3 world_grasp_point() const;
    Vec3 world_centroid() const;
    Vec3 body_to_world(const Vec3& p) const;
};

struct PoolExtent {
    double length = 4.0;
    double width = 2.0;
    double depth = 1.0;
};

struct DynamicsParams {
    // First-order actuator lag time constants (s) per axis.
    double tau_surge = 0.6;
    double tau_sway = 0.6;
    double tau_heave = 0.6;
    double tau_yaw = 0.6;
    // Full-scale command velocities.
    double vmax_surge = 0.5;   // m/s
    double vmax_sway = 0.3;    // m/s
    double vmax_heave = 0.25;  // m/s
    double vmax_yaw = 0.8;     // rad/s
    // Quadratic drag coefficients (1/m for translation, 1/rad for yaw).
    double drag_linear = 0.4;
    double drag_yaw = 0.5;
    // Gripper aperture travel rate (full range per second).
    double gripper_rate = 1.25;
    // Slip process.
    double slip_lambda = 0.5;  // 1/s
    double slip_kappa = 0.3;   // s^2/m
    // Vehicle depth limits (clamped like walls).
    double min_submergence = 0.05;   // keep below the surface
    double floor_clearance = 0.03;   // keep the body above the floor
};

struct MountParams {
    Vec3 gripper_offset{0.25, 0.0, -0.12};       // body frame
    Vec3 gripper_workspace_half{0.06, 0.05, 0.04};
    Vec3 forward_cam_offset{0.0, 0.0, 0.0};
    Vec3 top_cam_offset{0.0, 0.0, 0.10};
};

struct RovState {
    Vec3 position{0.3, 0.0, -0.35};
    double yaw = 0.0;
    double pitch = 0.0;  // set once from config, constant for the whole episode
    // Body velocities: surge (fwd), sway (left), heave (up), yaw rate.
    Eigen::Vector4d body_velocity = Eigen::Vector4d::Zero();
    double gripper_aperture = 1.0;       // 1 = fully open
    double gripper_target = 1.0;
    std::optional<int> held_object;
    double last_accel = 0.0;  // |dv/dt| of the translational axes, for the slip model

    double vehicle_depth() const { return -position.z(); }
    Mat3 body_rotation() const;  // body -> world (yaw only; translation is level)
    Vec3 gripper_anchor(const MountParams& mounts) const;
};

struct ActionCommand {
    double yaw = 0.0;       // + turns left (CCW)
    double forward = 0.0;   // + surge ahead
    double vertical = 0.0;  // + up
    double lateral = 0.0;   // + left
    bool open = false;
    bool close = false;

    void validate() const;
    std::array<double, 6> as_vector() const {
        return {yaw, forward, vertical, lateral, open ? 1.0 : 0.0, close ? 1.0 : 0.0};
    }
};

struct GraspOutcome {
    bool captured = false;
    int object_id = -1;
};

struct PoolWorld {
    PoolExtent extent;
    std::vector<ObjectInstance> objects;
    uint64_t rng_seed = 0;
    double time = 0.0;
    int64_t step_count = 0;
    // Rigid attachment of the held object, frozen at capture.
    Vec3 held_offset = Vec3::Zero();  // gripper-frame offset of the object origin
    double held_yaw_offset = 0.0;

    ObjectInstance* find_object(int id);
    const ObjectInstance* find_object(int id) const;
};

// Advances the world and vehicle by one fixed step (dt = 0.01 s in the
// control stack). Commanded velocities are tracked through first-order lag,
// quadratic drag dissipates free motion, integration is semi-implicit, the
// pitch constraint is reasserted, held objects follow the gripper rigidly,
// and the slip process is sampled for held objects. Throws SimFault on NaN.
void step(PoolWorld& world, RovState& rov, const ActionCommand& cmd, double dt,
          const DynamicsParams& dyn, const MountParams& mounts, Rng& slip_rng);

// Capture test at closure completion: an object is captured iff its grasp
// point lies inside the gripper workspace box (closed set). Nearest wins if
// several qualify.
GraspOutcome attempt_grasp(PoolWorld& world, RovState& rov, const MountParams& mounts);

// One step of the slip process for the held object. Returns true if the
// object slipped (and detaches it).
bool evaluate_slip(PoolWorld& world, RovState& rov, double dt, const DynamicsParams& dyn, Rng& slip_rng);

// Camera pose rigidly mounted to the body: `axes` columns are the camera
// x (image right), y (image down), and z (viewing direction) in world frame.
struct CameraPose {
    Vec3 origin = Vec3::Zero();
    Mat3 axes = Mat3::Identity();
};

CameraPose camera_pose(const RovState& rov, const Vec3& mount_offset);

struct ResetDistribution {
    double rov_x_min = 0.25, rov_x_max = 0.45;
    double rov_y_min = -0.20, rov_y_max = 0.20;
    double rov_depth_min = 0.30, rov_depth_max = 0.40;
    double rov_yaw_jitter = 0.12;  // rad, around the bearing to the workspace center
    double ws_x_min = 1.30, ws_x_max = 2.60;
    double ws_y_min = -0.60, ws_y_max = 0.60;
    double spacing_margin = 0.06;  // extra clearance between bounding spheres
};

struct ObjectSpec {
    ShapeKind kind = ShapeKind::Rock;
    double graspability = 1.0;
    double scale = 1.0;
};

struct ScenarioConfig {
    PoolExtent pool;
    std::vector<ObjectSpec> objects;
    ResetDistribution reset;
    DynamicsParams dynamics;
    MountParams mounts;
    double pitch_deg = 10.0;  // constant downward camera/vehicle pitch
    double depth_noise_sigma = 0.0;
    double far_plane = 10.0;
    int render_width = 224;
    int render_height = 160;
    double forward_fx = 140.0, forward_fy = 140.0;
    double top_fx = 100.0, top_fy = 100.0;

    CameraModel forward_camera() const;
    CameraModel top_camera() const;
};

ScenarioConfig scenario_from_json(const Json& j, const std::string& context);
Json scenario_to_json(const ScenarioConfig& s);

// Places objects at non-overlapping floor poses inside the workspace region
// and samples the vehicle reset pose. When three or more objects are
// requested, resamples until all of them project inside the initial forward
// camera view (100-attempt cap, then PlacementFailure).
void scatter_reset(PoolWorld& world, RovState& rov, Rng& rng, const ScenarioConfig& scenario);

}  // namespace aqua::sim
