#include "aquagrasp/sim.hpp"

#include <algorithm>
#include <cmath>

namespace aqua::sim {

ShapeKind shape_from_string(const std::string& name) {
    if (name == "rock") return ShapeKind::Rock;
    if (name == "seagrass") return ShapeKind::Seagrass;
    if (name == "duck") return ShapeKind::Duck;
    if (name == "pitcher") return ShapeKind::Pitcher;
    if (name == "can") return ShapeKind::Can;
    if (name == "drill") return ShapeKind::Drill;
    throw ConfigError("unknown object shape '" + name + "'");
}

std::string shape_to_string(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::Rock: return "rock";
        case ShapeKind::Seagrass: return "seagrass";
        case ShapeKind::Duck: return "duck";
        case ShapeKind::Pitcher: return "pitcher";
        case ShapeKind::Can: return "can";
        case ShapeKind::Drill: return "drill";
    }
    return "rock";
}

namespace {

Primitive sphere(Vec3 center, double r) {
    Primitive p;
    p.type = Primitive::Type::Sphere;
    p.a = center;
    p.radius = r;
    return p;
}

Primitive capsule(Vec3 a, Vec3 b, double r) {
    Primitive p;
    p.type = Primitive::Type::Capsule;
    p.a = a;
    p.b = b;
    p.radius = r;
    return p;
}

Primitive box(Vec3 center, Vec3 half) {
    Primitive p;
    p.type = Primitive::Type::Box;
    p.a = center;
    p.b = half;
    return p;
}

}  // namespace

ObjectShape make_shape(ShapeKind kind, double scale) {
    ObjectShape s;
    switch (kind) {
        case ShapeKind::Rock:
            s.prims = {sphere({0.0, 0.0, 0.055}, 0.06), sphere({0.03, 0.02, 0.04}, 0.045)};
            s.grasp_point = {0.0, 0.0, 0.115};
            break;
        case ShapeKind::Seagrass:
            s.prims = {capsule({0.0, 0.0, 0.02}, {0.0, 0.0, 0.26}, 0.02),
                       capsule({0.02, 0.0, 0.02}, {0.06, 0.03, 0.22}, 0.015)};
            s.grasp_point = {0.02, 0.0, 0.20};
            break;
        case ShapeKind::Duck:
            s.prims = {sphere({0.0, 0.0, 0.055}, 0.055), sphere({0.045, 0.0, 0.115}, 0.035)};
            s.grasp_point = {0.0, 0.0, 0.11};
            break;
        case ShapeKind::Pitcher:
            s.prims = {capsule({0.0, 0.0, 0.05}, {0.0, 0.0, 0.15}, 0.05),
                       capsule({0.068, 0.0, 0.07}, {0.068, 0.0, 0.15}, 0.012)};
            s.grasp_point = {0.068, 0.0, 0.162};
            break;
        case ShapeKind::Can:
            s.prims = {capsule({0.0, 0.0, 0.035}, {0.0, 0.0, 0.10}, 0.035)};
            s.grasp_point = {0.0, 0.0, 0.135};
            break;
        case ShapeKind::Drill:
            s.prims = {box({0.0, 0.0, 0.045}, {0.09, 0.035, 0.045}),
                       capsule({-0.02, 0.0, 0.09}, {-0.02, 0.0, 0.155}, 0.018)};
            s.grasp_point = {-0.02, 0.0, 0.173};
            break;
    }
    if (scale != 1.0) {
        for (auto& p : s.prims) {
            p.a *= scale;
            p.radius *= scale;
            if (p.type == Primitive::Type::Capsule || p.type == Primitive::Type::Box) p.b *= scale;
        }
        s.grasp_point *= scale;
    }
    // Centroid and bounding radius from primitive support points.
    Vec3 sum = Vec3::Zero();
    double weight = 0.0;
    for (const auto& p : s.prims) {
        const Vec3 center = p.type == Primitive::Type::Capsule ? Vec3(0.5 * (p.a + p.b)) : p.a;
        const double w = p.type == Primitive::Type::Box ? p.b.prod() : p.radius * p.radius * p.radius;
        sum += w * center;
        weight += w;
    }
    s.centroid = sum / weight;
    double r = 0.0;
    for (const auto& p : s.prims) {
        switch (p.type) {
            case Primitive::Type::Sphere:
                r = std::max(r, (p.a - s.centroid).norm() + p.radius);
                break;
            case Primitive::Type::Capsule:
                r = std::max({r, (p.a - s.centroid).norm() + p.radius, (p.b - s.centroid).norm() + p.radius});
                break;
            case Primitive::Type::Box:
                r = std::max(r, (p.a - s.centroid).norm() + p.b.norm());
                break;
        }
    }
    s.bound_radius = r;
    return s;
}

Vec3 ObjectInstance::body_to_world(const Vec3& p) const {
    const double c = std::cos(yaw), sn = std::sin(yaw);
    return position + Vec3(c * p.x() - sn * p.y(), sn * p.x() + c * p.y(), p.z());
}

Vec3 ObjectInstance::world_grasp_point() const { return body_to_world(shape.grasp_point); }
Vec3 ObjectInstance::world_centroid() const { return body_to_world(shape.centroid); }

Mat3 RovState::body_rotation() const {
    const double c = std::cos(yaw), s = std::sin(yaw);
    Mat3 r;
    r << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
    return r;
}

Vec3 RovState::gripper_anchor(const MountParams& mounts) const {
    return position + body_rotation() * mounts.gripper_offset;
}

void ActionCommand::validate() const {
    const auto ok = [](double v) { return std::abs(v) <= 1.0 + 1e-12; };
    if (!ok(yaw) || !ok(forward) || !ok(vertical) || !ok(lateral))
        throw ConfigError("ActionCommand: axis magnitude exceeds 1");
    if (open && close) throw ConfigError("ActionCommand: open and close are mutually exclusive");
}

CameraPose camera_pose(const RovState& rov, const Vec3& mount_offset) {
    CameraPose pose;
    pose.origin = rov.position + rov.body_rotation() * mount_offset;
    const double ct = std::cos(rov.pitch), st = std::sin(rov.pitch);
    // Body-frame camera basis for a forward camera pitched down by `pitch`.
    const Vec3 view_b{ct, 0.0, -st};
    const Vec3 right_b{0.0, -1.0, 0.0};
    const Vec3 down_b{-st, 0.0, -ct};
    const Mat3 r = rov.body_rotation();
    Mat3 axes;
    axes.col(0) = r * right_b;
    axes.col(1) = r * down_b;
    axes.col(2) = r * view_b;
    pose.axes = axes;
    return pose;
}

ObjectInstance* PoolWorld::find_object(int id) {
    for (auto& o : objects)
        if (o.id == id) return &o;
    return nullptr;
}

const ObjectInstance* PoolWorld::find_object(int id) const {
    for (const auto& o : objects)
        if (o.id == id) return &o;
    return nullptr;
}

namespace {

double axis_accel(double v, double v_cmd, double tau, double drag) {
    return (v_cmd - v) / tau - drag * v * std::abs(v);
}

void rest_on_floor(ObjectInstance& obj, const PoolExtent& extent) {
    obj.position.x() = std::clamp(obj.position.x(), 0.1, extent.length - 0.1);
    obj.position.y() = std::clamp(obj.position.y(), -extent.width / 2 + 0.1, extent.width / 2 - 0.1);
    obj.position.z() = -extent.depth;
}

}  // namespace

bool evaluate_slip(PoolWorld& world, RovState& rov, double dt, const DynamicsParams& dyn, Rng& slip_rng) {
    if (!rov.held_object) return false;
    ObjectInstance* obj = world.find_object(*rov.held_object);
    if (obj == nullptr) {
        rov.held_object.reset();
        return false;
    }
    const double p =
        dt * dyn.slip_lambda * (1.0 - obj->graspability) * (1.0 + dyn.slip_kappa * rov.last_accel);
    if (p <= 0.0) return false;
    if (!slip_rng.bernoulli(p)) return false;
    rov.held_object.reset();
    rest_on_floor(*obj, world.extent);
    return true;
}

void step(PoolWorld& world, RovState& rov, const ActionCommand& cmd, double dt,
          const DynamicsParams& dyn, const MountParams& mounts, Rng& slip_rng) {
    cmd.validate();

    const Eigen::Vector4d v_cmd{cmd.forward * dyn.vmax_surge, cmd.lateral * dyn.vmax_sway,
                                cmd.vertical * dyn.vmax_heave, cmd.yaw * dyn.vmax_yaw};
    Eigen::Vector4d accel;
    accel[0] = axis_accel(rov.body_velocity[0], v_cmd[0], dyn.tau_surge, dyn.drag_linear);
    accel[1] = axis_accel(rov.body_velocity[1], v_cmd[1], dyn.tau_sway, dyn.drag_linear);
    accel[2] = axis_accel(rov.body_velocity[2], v_cmd[2], dyn.tau_heave, dyn.drag_linear);
    accel[3] = axis_accel(rov.body_velocity[3], v_cmd[3], dyn.tau_yaw, dyn.drag_yaw);
    rov.body_velocity += dt * accel;
    rov.last_accel = accel.head<3>().norm();

    // Semi-implicit: position and heading integrate the updated velocity.
    rov.yaw += dt * rov.body_velocity[3];
    if (rov.yaw > M_PI) rov.yaw -= 2.0 * M_PI;
    if (rov.yaw < -M_PI) rov.yaw += 2.0 * M_PI;
    const Vec3 vel_world =
        rov.body_rotation() * Vec3(rov.body_velocity[0], rov.body_velocity[1], rov.body_velocity[2]);
    rov.position += dt * vel_world;

    // Pool boundary: clamp with zero restitution. A horizontal wall contact
    // zeroes both horizontal body axes (conservative, no sliding resolution).
    const PoolExtent& ext = world.extent;
    const double body_margin = 0.15;
    const Vec3 before = rov.position;
    rov.position.x() = std::clamp(rov.position.x(), body_margin, ext.length - body_margin);
    rov.position.y() = std::clamp(rov.position.y(), -ext.width / 2 + body_margin, ext.width / 2 - body_margin);
    rov.position.z() = std::clamp(rov.position.z(), -(ext.depth - dyn.floor_clearance), -dyn.min_submergence);
    if (before.x() != rov.position.x() || before.y() != rov.position.y()) {
        rov.body_velocity[0] = 0.0;
        rov.body_velocity[1] = 0.0;
    }
    if (before.z() != rov.position.z()) rov.body_velocity[2] = 0.0;

    // Gripper aperture tracks its commanded target at the actuator rate.
    if (cmd.open) rov.gripper_target = 1.0;
    if (cmd.close) rov.gripper_target = 0.0;
    const double max_delta = dyn.gripper_rate * dt;
    const double delta = std::clamp(rov.gripper_target - rov.gripper_aperture, -max_delta, max_delta);
    rov.gripper_aperture = std::clamp(rov.gripper_aperture + delta, 0.0, 1.0);

    // Held object follows the gripper rigidly, then the slip process runs.
    if (rov.held_object) {
        ObjectInstance* obj = world.find_object(*rov.held_object);
        if (obj != nullptr) {
            obj->yaw = rov.yaw + world.held_yaw_offset;
            const Vec3 anchor = rov.gripper_anchor(mounts);
            obj->position = anchor + rov.body_rotation() * world.held_offset;
        }
        evaluate_slip(world, rov, dt, dyn, slip_rng);
    }

    world.time += dt;
    world.step_count += 1;

    if (!rov.position.allFinite() || !rov.body_velocity.allFinite() || !std::isfinite(rov.yaw))
        throw SimFault("NaN in vehicle state at t=" + std::to_string(world.time));
}

GraspOutcome attempt_grasp(PoolWorld& world, RovState& rov, const MountParams& mounts) {
    const Vec3 anchor = rov.gripper_anchor(mounts);
    const Mat3 body_from_world = rov.body_rotation().transpose();
    GraspOutcome outcome;
    double best = std::numeric_limits<double>::max();
    constexpr double kBoundaryEps = 1e-12;  // closed-set boundary under rounding
    for (const auto& obj : world.objects) {
        const Vec3 rel = body_from_world * (obj.world_grasp_point() - anchor);
        const Vec3& half = mounts.gripper_workspace_half;
        if (std::abs(rel.x()) <= half.x() + kBoundaryEps && std::abs(rel.y()) <= half.y() + kBoundaryEps &&
            std::abs(rel.z()) <= half.z() + kBoundaryEps) {
            const double d = rel.norm();
            if (d < best) {
                best = d;
                outcome.captured = true;
                outcome.object_id = obj.id;
            }
        }
    }
    if (outcome.captured) {
        rov.held_object = outcome.object_id;
        ObjectInstance* obj = world.find_object(outcome.object_id);
        world.held_yaw_offset = obj->yaw - rov.yaw;
        world.held_offset = rov.body_rotation().transpose() * (obj->position - rov.gripper_anchor(mounts));
    }
    return outcome;
}

CameraModel ScenarioConfig::forward_camera() const {
    CameraModel cam;
    cam.fx = forward_fx;
    cam.fy = forward_fy;
    cam.cx = render_width / 2.0;
    cam.cy = render_height / 2.0;
    cam.width = render_width;
    cam.height = render_height;
    return cam;
}

CameraModel ScenarioConfig::top_camera() const {
    CameraModel cam;
    cam.fx = top_fx;
    cam.fy = top_fy;
    cam.cx = render_width / 2.0;
    cam.cy = render_height / 2.0;
    cam.width = render_width;
    cam.height = render_height;
    return cam;
}

void scatter_reset(PoolWorld& world, RovState& rov, Rng& rng, const ScenarioConfig& scenario) {
    world.extent = scenario.pool;
    const ResetDistribution& rd = scenario.reset;
    const CameraModel cam = scenario.forward_camera();
    const double visibility_margin = 4.0;  // px

    for (int attempt = 0; attempt < 100; ++attempt) {
        // Vehicle reset pose: shallow depth, facing the workspace center.
        RovState candidate;
        candidate.position = Vec3(rng.uniform(rd.rov_x_min, rd.rov_x_max), rng.uniform(rd.rov_y_min, rd.rov_y_max),
                                  -rng.uniform(rd.rov_depth_min, rd.rov_depth_max));
        const Vec2 ws_center{0.5 * (rd.ws_x_min + rd.ws_x_max), 0.5 * (rd.ws_y_min + rd.ws_y_max)};
        const double bearing = std::atan2(ws_center.y() - candidate.position.y(),
                                          ws_center.x() - candidate.position.x());
        candidate.yaw = bearing + rng.uniform(-rd.rov_yaw_jitter, rd.rov_yaw_jitter);
        candidate.pitch = scenario.pitch_deg * M_PI / 180.0;
        candidate.gripper_aperture = 1.0;
        candidate.gripper_target = 1.0;

        // Object placements: non-overlapping floor poses.
        std::vector<ObjectInstance> placed;
        bool overlap_failed = false;
        for (size_t i = 0; i < scenario.objects.size(); ++i) {
            ObjectInstance obj;
            obj.id = static_cast<int>(i);
            obj.kind = scenario.objects[i].kind;
            obj.scale = scenario.objects[i].scale;
            obj.graspability = scenario.objects[i].graspability;
            obj.shape = make_shape(obj.kind, obj.scale);
            bool ok = false;
            for (int tries = 0; tries < 40 && !ok; ++tries) {
                obj.position = Vec3(rng.uniform(rd.ws_x_min, rd.ws_x_max), rng.uniform(rd.ws_y_min, rd.ws_y_max),
                                    -scenario.pool.depth);
                obj.yaw = rng.uniform(-M_PI, M_PI);
                ok = true;
                for (const auto& other : placed) {
                    const double min_dist =
                        obj.shape.bound_radius + other.shape.bound_radius + rd.spacing_margin;
                    if ((obj.world_centroid() - other.world_centroid()).head<2>().norm() < min_dist) {
                        ok = false;
                        break;
                    }
                }
            }
            if (!ok) {
                overlap_failed = true;
                break;
            }
            placed.push_back(obj);
        }
        if (overlap_failed) continue;

        // Multi-object scenes must start with every object in view.
        bool all_visible = true;
        if (placed.size() >= 3) {
            const CameraPose pose = camera_pose(candidate, scenario.mounts.forward_cam_offset);
            for (const auto& obj : placed) {
                const Vec3 in_cam = pose.axes.transpose() * (obj.world_centroid() - pose.origin);
                if (in_cam.z() <= 0.05) {
                    all_visible = false;
                    break;
                }
                const Vec2 px = cam.project_point(in_cam);
                if (px.x() < visibility_margin || px.x() >= cam.width - visibility_margin ||
                    px.y() < visibility_margin || px.y() >= cam.height - visibility_margin) {
                    all_visible = false;
                    break;
                }
            }
        }
        if (!all_visible) continue;

        world.objects = std::move(placed);
        world.time = 0.0;
        world.step_count = 0;
        world.held_offset = Vec3::Zero();
        world.held_yaw_offset = 0.0;
        rov = candidate;
        return;
    }
    throw PlacementFailure("scatter_reset: no valid layout after 100 attempts");
}

ScenarioConfig scenario_from_json(const Json& j, const std::string& context) {
    ScenarioConfig s;
    if (j.contains("pool")) {
        const Json& p = j["pool"];
        s.pool.length = get_or<double>(p, "length", s.pool.length, context + ".pool");
        s.pool.width = get_or<double>(p, "width", s.pool.width, context + ".pool");
        s.pool.depth = get_or<double>(p, "depth", s.pool.depth, context + ".pool");
    }
    if (j.contains("objects")) {
        s.objects.clear();
        for (const auto& jo : j["objects"]) {
            ObjectSpec spec;
            spec.kind = shape_from_string(get_as<std::string>(jo, "shape", context + ".objects[]"));
            spec.graspability = get_or<double>(jo, "graspability", 1.0, context + ".objects[]");
            spec.scale = get_or<double>(jo, "scale", 1.0, context + ".objects[]");
            if (spec.graspability <= 0.0 || spec.graspability > 1.0)
                throw ConfigError(context + ".objects[]: graspability must lie in (0, 1]");
            s.objects.push_back(spec);
        }
    }
    if (j.contains("dynamics")) {
        const Json& d = j["dynamics"];
        const std::string c = context + ".dynamics";
        s.dynamics.tau_surge = get_or<double>(d, "tau_surge", s.dynamics.tau_surge, c);
        s.dynamics.tau_sway = get_or<double>(d, "tau_sway", s.dynamics.tau_sway, c);
        s.dynamics.tau_heave = get_or<double>(d, "tau_heave", s.dynamics.tau_heave, c);
        s.dynamics.tau_yaw = get_or<double>(d, "tau_yaw", s.dynamics.tau_yaw, c);
        s.dynamics.vmax_surge = get_or<double>(d, "vmax_surge", s.dynamics.vmax_surge, c);
        s.dynamics.vmax_sway = get_or<double>(d, "vmax_sway", s.dynamics.vmax_sway, c);
        s.dynamics.vmax_heave = get_or<double>(d, "vmax_heave", s.dynamics.vmax_heave, c);
        s.dynamics.vmax_yaw = get_or<double>(d, "vmax_yaw", s.dynamics.vmax_yaw, c);
        s.dynamics.drag_linear = get_or<double>(d, "drag_linear", s.dynamics.drag_linear, c);
        s.dynamics.drag_yaw = get_or<double>(d, "drag_yaw", s.dynamics.drag_yaw, c);
        s.dynamics.gripper_rate = get_or<double>(d, "gripper_rate", s.dynamics.gripper_rate, c);
        s.dynamics.slip_lambda = get_or<double>(d, "slip_lambda", s.dynamics.slip_lambda, c);
        s.dynamics.slip_kappa = get_or<double>(d, "slip_kappa", s.dynamics.slip_kappa, c);
    }
    if (j.contains("reset")) {
        const Json& r = j["reset"];
        const std::string c = context + ".reset";
        s.reset.rov_x_min = get_or<double>(r, "rov_x_min", s.reset.rov_x_min, c);
        s.reset.rov_x_max = get_or<double>(r, "rov_x_max", s.reset.rov_x_max, c);
        s.reset.rov_y_min = get_or<double>(r, "rov_y_min", s.reset.rov_y_min, c);
        s.reset.rov_y_max = get_or<double>(r, "rov_y_max", s.reset.rov_y_max, c);
        s.reset.rov_depth_min = get_or<double>(r, "rov_depth_min", s.reset.rov_depth_min, c);
        s.reset.rov_depth_max = get_or<double>(r, "rov_depth_max", s.reset.rov_depth_max, c);
        s.reset.rov_yaw_jitter = get_or<double>(r, "rov_yaw_jitter", s.reset.rov_yaw_jitter, c);
        s.reset.ws_x_min = get_or<double>(r, "ws_x_min", s.reset.ws_x_min, c);
        s.reset.ws_x_max = get_or<double>(r, "ws_x_max", s.reset.ws_x_max, c);
        s.reset.ws_y_min = get_or<double>(r, "ws_y_min", s.reset.ws_y_min, c);
        s.reset.ws_y_max = get_or<double>(r, "ws_y_max", s.reset.ws_y_max, c);
        s.reset.spacing_margin = get_or<double>(r, "spacing_margin", s.reset.spacing_margin, c);
    }
    if (j.contains("mounts")) {
        const Json& m = j["mounts"];
        const std::string c = context + ".mounts";
        const auto vec3 = [&](const char* key, Vec3 fallback) {
            if (!m.contains(key)) return fallback;
            const auto v = get_as<std::vector<double>>(m, key, c);
            if (v.size() != 3) throw ConfigError(c + ": key '" + key + "' must hold 3 values");
            return Vec3(v[0], v[1], v[2]);
        };
        s.mounts.gripper_offset = vec3("gripper_offset", s.mounts.gripper_offset);
        s.mounts.gripper_workspace_half = vec3("gripper_workspace_half", s.mounts.gripper_workspace_half);
        s.mounts.forward_cam_offset = vec3("forward_cam_offset", s.mounts.forward_cam_offset);
        s.mounts.top_cam_offset = vec3("top_cam_offset", s.mounts.top_cam_offset);
    }
    s.pitch_deg = get_or<double>(j, "pitch_deg", s.pitch_deg, context);
    s.depth_noise_sigma = get_or<double>(j, "depth_noise_sigma", s.depth_noise_sigma, context);
    s.far_plane = get_or<double>(j, "far_plane", s.far_plane, context);
    s.render_width = get_or<int>(j, "render_width", s.render_width, context);
    s.render_height = get_or<int>(j, "render_height", s.render_height, context);
    s.forward_fx = get_or<double>(j, "forward_fx", s.forward_fx, context);
    s.forward_fy = get_or<double>(j, "forward_fy", s.forward_fy, context);
    s.top_fx = get_or<double>(j, "top_fx", s.top_fx, context);
    s.top_fy = get_or<double>(j, "top_fy", s.top_fy, context);
    return s;
}

Json scenario_to_json(const ScenarioConfig& s) {
    Json objects = Json::array();
    for (const auto& o : s.objects)
        objects.push_back(Json{{"shape", shape_to_string(o.kind)},
                               {"graspability", o.graspability},
                               {"scale", o.scale}});
    return Json{
        {"pool", {{"length", s.pool.length}, {"width", s.pool.width}, {"depth", s.pool.depth}}},
        {"objects", objects},
        {"dynamics",
         {{"tau_surge", s.dynamics.tau_surge},
          {"tau_sway", s.dynamics.tau_sway},
          {"tau_heave", s.dynamics.tau_heave},
          {"tau_yaw", s.dynamics.tau_yaw},
          {"vmax_surge", s.dynamics.vmax_surge},
          {"vmax_sway", s.dynamics.vmax_sway},
          {"vmax_heave", s.dynamics.vmax_heave},
          {"vmax_yaw", s.dynamics.vmax_yaw},
          {"drag_linear", s.dynamics.drag_linear},
          {"drag_yaw", s.dynamics.drag_yaw},
          {"gripper_rate", s.dynamics.gripper_rate},
          {"slip_lambda", s.dynamics.slip_lambda},
          {"slip_kappa", s.dynamics.slip_kappa}}},
        {"reset",
         {{"rov_x_min", s.reset.rov_x_min},
          {"rov_x_max", s.reset.rov_x_max},
          {"rov_y_min", s.reset.rov_y_min},
          {"rov_y_max", s.reset.rov_y_max},
          {"rov_depth_min", s.reset.rov_depth_min},
          {"rov_depth_max", s.reset.rov_depth_max},
          {"rov_yaw_jitter", s.reset.rov_yaw_jitter},
          {"ws_x_min", s.reset.ws_x_min},
          {"ws_x_max", s.reset.ws_x_max},
          {"ws_y_min", s.reset.ws_y_min},
          {"ws_y_max", s.reset.ws_y_max},
          {"spacing_margin", s.reset.spacing_margin}}},
        {"pitch_deg", s.pitch_deg},
        {"depth_noise_sigma", s.depth_noise_sigma},
        {"far_plane", s.far_plane},
        {"render_width", s.render_width},
        {"render_height", s.render_height},
        {"forward_fx", s.forward_fx},
        {"forward_fy", s.forward_fy},
        {"top_fx", s.top_fx},
        {"top_fy", s.top_fy}};
}

}  // namespace aqua::sim
