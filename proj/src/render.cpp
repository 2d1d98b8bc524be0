#include "aquagrasp/render.hpp"

#include <algorithm>
#include <cmath>

namespace aqua::sim {

namespace {

// Ray/primitive intersections with an unnormalized direction whose camera
// z component is 1, so the ray parameter t equals camera-frame z-depth.

double ray_sphere(const Vec3& origin, const Vec3& dir, const Vec3& center, double radius) {
    const Vec3 oc = origin - center;
    const double a = dir.squaredNorm();
    const double b = 2.0 * oc.dot(dir);
    const double c = oc.squaredNorm() - radius * radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return -1.0;
    const double sq = std::sqrt(disc);
    const double t0 = (-b - sq) / (2.0 * a);
    if (t0 > 1e-6) return t0;
    const double t1 = (-b + sq) / (2.0 * a);
    return t1 > 1e-6 ? t1 : -1.0;
}

// Closest-approach capsule test: solve the quadratic for the infinite
// cylinder about the segment, then clamp to the segment and fall back to the
// end-cap spheres.
double ray_capsule(const Vec3& origin, const Vec3& dir, const Vec3& pa, const Vec3& pb, double radius) {
    const Vec3 ba = pb - pa;
    const Vec3 oa = origin - pa;
    const double baba = ba.squaredNorm();
    const double bard = ba.dot(dir);
    const double baoa = ba.dot(oa);
    const double rdoa = dir.dot(oa);
    const double oaoa = oa.squaredNorm();
    const double a = baba * dir.squaredNorm() - bard * bard;
    const double b = baba * rdoa - baoa * bard;
    const double c = baba * oaoa - baoa * baoa - radius * radius * baba;
    const double h = b * b - a * c;
    if (h >= 0.0 && std::abs(a) > 1e-12) {
        const double t = (-b - std::sqrt(h)) / a;
        const double y = baoa + t * bard;
        if (y > 0.0 && y < baba && t > 1e-6) return t;
        // End caps.
        const Vec3 cap = y <= 0.0 ? pa : pb;
        return ray_sphere(origin, dir, cap, radius);
    }
    const double t_a = ray_sphere(origin, dir, pa, radius);
    const double t_b = ray_sphere(origin, dir, pb, radius);
    if (t_a < 0.0) return t_b;
    if (t_b < 0.0) return t_a;
    return std::min(t_a, t_b);
}

double ray_box(const Vec3& origin, const Vec3& dir, const Vec3& center, const Vec3& half) {
    double tmin = 1e-6, tmax = std::numeric_limits<double>::max();
    for (int i = 0; i < 3; ++i) {
        const double o = origin[i] - center[i];
        if (std::abs(dir[i]) < 1e-12) {
            if (std::abs(o) > half[i]) return -1.0;
            continue;
        }
        double t0 = (-half[i] - o) / dir[i];
        double t1 = (half[i] - o) / dir[i];
        if (t0 > t1) std::swap(t0, t1);
        tmin = std::max(tmin, t0);
        tmax = std::min(tmax, t1);
        if (tmin > tmax) return -1.0;
    }
    return tmin;
}

// Nearest hit over one object's primitives; ray given in the object frame.
double ray_object(const Vec3& origin, const Vec3& dir, const ObjectShape& shape) {
    double best = -1.0;
    for (const auto& prim : shape.prims) {
        double t = -1.0;
        switch (prim.type) {
            case Primitive::Type::Sphere: t = ray_sphere(origin, dir, prim.a, prim.radius); break;
            case Primitive::Type::Capsule: t = ray_capsule(origin, dir, prim.a, prim.b, prim.radius); break;
            case Primitive::Type::Box: t = ray_box(origin, dir, prim.a, prim.b); break;
        }
        if (t > 0.0 && (best < 0.0 || t < best)) best = t;
    }
    return best;
}

}  // namespace

double camera_depth(const CameraPose& pose, const Vec3& world_point) {
    return pose.axes.col(2).dot(world_point - pose.origin);
}

ImageU8 Observation::mask(int id) const {
    ImageU8 out(labels.width, labels.height, 0);
    const uint8_t code = static_cast<uint8_t>(id + 1);
    for (size_t i = 0; i < labels.data.size(); ++i)
        if (labels.data[i] == code) out.data[i] = 1;
    return out;
}

Observation render(const PoolWorld& world, const RovState& rov, const ScenarioConfig& scenario,
                   CameraId which, Rng* noise_rng, const RenderOptions& options) {
    const CameraModel cam = which == CameraId::Forward ? scenario.forward_camera() : scenario.top_camera();
    const Vec3 mount = which == CameraId::Forward ? scenario.mounts.forward_cam_offset
                                                  : scenario.mounts.top_cam_offset;
    const CameraPose pose = camera_pose(rov, mount);
    const float far = static_cast<float>(scenario.far_plane);

    Observation obs;
    obs.timestamp = world.time;
    obs.depth = ImageF(cam.width, cam.height, far);
    obs.labels = ImageU8(cam.width, cam.height, 0);
    obs.proprio = {rov.yaw, rov.pitch, rov.vehicle_depth()};
    obs.gripper_aperture = rov.gripper_aperture;
    obs.held_object = rov.held_object;

    struct Accum {
        int64_t count = 0;
        double sum_u = 0.0;
        double sum_v = 0.0;
        double min_depth = std::numeric_limits<double>::max();
    };
    std::map<int, Accum> accums;

    for (const auto& obj : world.objects) {
        const Vec3 centroid_w = obj.world_centroid();
        const Vec3 in_cam = pose.axes.transpose() * (centroid_w - pose.origin);
        const double zc = in_cam.z();
        if (zc + obj.shape.bound_radius <= 0.05) continue;  // fully behind the camera

        // Conservative projected bounding rectangle.
        const double near_z = std::max(zc - obj.shape.bound_radius, 0.02);
        const double rad_px =
            std::max(cam.fx, cam.fy) * obj.shape.bound_radius / near_z + 2.0;
        double cu = cam.cx, cv = cam.cy;
        if (zc > 0.0) {
            cu = cam.fx * in_cam.x() / zc + cam.cx;
            cv = cam.fy * in_cam.y() / zc + cam.cy;
        }
        const int x0 = std::max(0, static_cast<int>(std::floor(cu - rad_px)));
        const int x1 = std::min(cam.width - 1, static_cast<int>(std::ceil(cu + rad_px)));
        const int y0 = std::max(0, static_cast<int>(std::floor(cv - rad_px)));
        const int y1 = std::min(cam.height - 1, static_cast<int>(std::ceil(cv + rad_px)));
        if (x0 > x1 || y0 > y1) continue;

        // Transform the camera into the object frame once; rays stay cheap.
        const double c = std::cos(obj.yaw), sn = std::sin(obj.yaw);
        Mat3 obj_rot;
        obj_rot << c, -sn, 0.0, sn, c, 0.0, 0.0, 0.0, 1.0;
        const Mat3 world_to_obj = obj_rot.transpose();
        const Vec3 origin_obj = world_to_obj * (pose.origin - obj.position);
        const Mat3 ray_basis = world_to_obj * pose.axes;

        const uint8_t code = static_cast<uint8_t>(obj.id + 1);
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const Vec2 n = cam.undistort_pixel({static_cast<double>(x), static_cast<double>(y)});
                const Vec3 dir_obj = ray_basis * Vec3(n.x(), n.y(), 1.0);
                const double t = ray_object(origin_obj, dir_obj, obj.shape);
                if (t <= 0.0) continue;
                float& z = obs.depth.at(x, y);
                if (static_cast<float>(t) < z) {
                    z = static_cast<float>(t);
                    obs.labels.at(x, y) = code;
                }
            }
        }
    }

    // View statistics from the resolved label image.
    for (int y = 0; y < cam.height; ++y) {
        for (int x = 0; x < cam.width; ++x) {
            const uint8_t code = obs.labels.at(x, y);
            if (code == 0) continue;
            Accum& a = accums[code - 1];
            a.count += 1;
            a.sum_u += x;
            a.sum_v += y;
            a.min_depth = std::min(a.min_depth, static_cast<double>(obs.depth.at(x, y)));
        }
    }
    for (const auto& [id, a] : accums) {
        ObjectView view;
        view.id = id;
        view.pixel_count = static_cast<int>(a.count);
        view.centroid_u = a.sum_u / static_cast<double>(a.count);
        view.centroid_v = a.sum_v / static_cast<double>(a.count);
        view.min_depth = a.min_depth;
        obs.views.push_back(view);
    }

    // Grasp-point tracks (the point-tracker oracle): projected pixel plus an
    // occlusion-aware visibility flag.
    for (const auto& obj : world.objects) {
        TrackPoint tp;
        const Vec3 gp = obj.world_grasp_point();
        const Vec3 in_cam = pose.axes.transpose() * (gp - pose.origin);
        if (in_cam.z() > 0.02) {
            const Vec2 px = cam.project_point(in_cam);
            tp.u = px.x();
            tp.v = px.y();
            if (cam.pixel_in_bounds(px)) {
                const int xi = static_cast<int>(px.x());
                const int yi = static_cast<int>(px.y());
                const float zbuf = obs.depth.at(xi, yi);
                // Visible unless something else covers the point.
                tp.visible = static_cast<double>(zbuf) >= in_cam.z() - 0.02 ||
                             obs.labels.at(xi, yi) == static_cast<uint8_t>(obj.id + 1);
            }
        }
        obs.tracks[obj.id] = tp;
    }

    if (noise_rng != nullptr && options.depth_noise_sigma > 0.0) {
        for (auto& z : obs.depth.data)
            if (z < far) z += static_cast<float>(noise_rng->normal() * options.depth_noise_sigma);
    }

    if (options.with_intensity) {
        obs.intensity = ImageF(cam.width, cam.height, 0.0f);
        for (size_t i = 0; i < obs.depth.data.size(); ++i) {
            const float z = obs.depth.data[i];
            if (z >= far) continue;
            const uint8_t code = obs.labels.data[i];
            const float base = 0.35f + 0.11f * static_cast<float>(code % 6);
            obs.intensity.data[i] = std::clamp(base * (1.0f - z / far), 0.0f, 1.0f);
        }
    }

    return obs;
}

}  // namespace aqua::sim
