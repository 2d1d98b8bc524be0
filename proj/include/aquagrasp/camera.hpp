#pragma once

#include <array>
#include <string>

#include <Eigen/Dense>

#include "aquagrasp/errors.hpp"
#include "aquagrasp/json_util.hpp"

namespace aqua {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Pinhole camera with Brown-Conrady distortion [k1, k2, p1, p2, k3].
struct CameraModel {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 0;
    int height = 0;
    std::array<double, 5> dist{0.0, 0.0, 0.0, 0.0, 0.0};

    void validate(const std::string& context) const;

    bool has_distortion() const {
        return dist[0] != 0.0 || dist[1] != 0.0 || dist[2] != 0.0 || dist[3] != 0.0 || dist[4] != 0.0;
    }

    // Brown-Conrady forward model on normalized coordinates.
    Vec2 distort_normalized(const Vec2& n) const;

    // Inverse via damped fixed-point iteration; throws NonConvergent if the
    // residual does not reach `tol` within `max_iter` rounds.
    Vec2 undistort_normalized(const Vec2& d, int max_iter = 50, double tol = 1e-8) const;

    // Pixel -> normalized (applies K^-1 then undistortion).
    Vec2 undistort_pixel(const Vec2& pixel) const;

    // Normalized (undistorted) -> pixel through distortion and K.
    Vec2 project_normalized(const Vec2& n) const;

    // Camera-frame 3-D point -> pixel. Throws BehindCamera if z <= 0.
    Vec2 project_point(const Vec3& p) const;

    bool pixel_in_bounds(const Vec2& px) const {
        return px.x() >= 0.0 && px.x() < width && px.y() >= 0.0 && px.y() < height;
    }
};

CameraModel camera_from_json(const Json& j, const std::string& context);
Json camera_to_json(const CameraModel& cam);

// Ray through normalized coordinates intersected with the fronto-parallel
// plane at depth Z: returns Z * [x, y, 1]^T. Throws InvalidDepth if Z <= 0.
Vec3 ray_plane_point(const Vec2& normalized, double plane_depth);

}  // namespace aqua
