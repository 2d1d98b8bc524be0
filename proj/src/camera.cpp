#include "aquagrasp/camera.hpp"

namespace aqua {

void CameraModel::validate(const std::string& context) const {
    if (fx <= 0.0 || fy <= 0.0) throw ConfigError(context + ": focal lengths must be positive");
    if (width <= 0 || height <= 0) throw ConfigError(context + ": resolution must be positive");
    if (cx < 0.0 || cx >= width) throw ConfigError(context + ": cx out of [0, width)");
    if (cy < 0.0 || cy >= height) throw ConfigError(context + ": cy out of [0, height)");
}

Vec2 CameraModel::distort_normalized(const Vec2& n) const {
    const double x = n.x();
    const double y = n.y();
    const double k1 = dist[0], k2 = dist[1], p1 = dist[2], p2 = dist[3], k3 = dist[4];
    const double r2 = x * x + y * y;
    const double r4 = r2 * r2;
    const double r6 = r4 * r2;
    const double radial = 1.0 + k1 * r2 + k2 * r4 + k3 * r6;
    const double dx = 2.0 * p1 * x * y + p2 * (r2 + 2.0 * x * x);
    const double dy = p1 * (r2 + 2.0 * y * y) + 2.0 * p2 * x * y;
    return {x * radial + dx, y * radial + dy};
}

Vec2 CameraModel::undistort_normalized(const Vec2& d, int max_iter, double tol) const {
    if (!has_distortion()) return d;
    // Damped fixed-point iteration: peel the distortion delta off the
    // current estimate, halving the step whenever the residual grows.
    Vec2 n = d;
    double damping = 1.0;
    double prev_err = std::numeric_limits<double>::max();
    for (int iter = 0; iter < max_iter; ++iter) {
        const Vec2 reprojected = distort_normalized(n);
        const Vec2 err = reprojected - d;
        const double err_norm = err.norm();
        if (err_norm < tol) return n;
        if (err_norm > prev_err) damping *= 0.5;
        prev_err = err_norm;
        n -= damping * err;
    }
    if ((distort_normalized(n) - d).norm() < tol) return n;
    throw NonConvergent("undistort_normalized: no convergence after " + std::to_string(max_iter) +
                        " iterations");
}

Vec2 CameraModel::undistort_pixel(const Vec2& pixel) const {
    const Vec2 distorted{(pixel.x() - cx) / fx, (pixel.y() - cy) / fy};
    return undistort_normalized(distorted);
}

Vec2 CameraModel::project_normalized(const Vec2& n) const {
    const Vec2 d = distort_normalized(n);
    return {fx * d.x() + cx, fy * d.y() + cy};
}

Vec2 CameraModel::project_point(const Vec3& p) const {
    if (p.z() <= 0.0) throw BehindCamera("project_point: point has non-positive depth");
    return project_normalized({p.x() / p.z(), p.y() / p.z()});
}

Vec3 ray_plane_point(const Vec2& normalized, double plane_depth) {
    if (plane_depth <= 0.0) throw InvalidDepth("ray_plane_point: plane depth must be positive");
    return {plane_depth * normalized.x(), plane_depth * normalized.y(), plane_depth};
}

CameraModel camera_from_json(const Json& j, const std::string& context) {
    CameraModel cam;
    cam.fx = get_as<double>(j, "fx", context);
    cam.fy = get_as<double>(j, "fy", context);
    cam.cx = get_as<double>(j, "cx", context);
    cam.cy = get_as<double>(j, "cy", context);
    cam.width = get_as<int>(j, "width", context);
    cam.height = get_as<int>(j, "height", context);
    const auto d = get_as<std::vector<double>>(j, "dist", context);
    if (d.size() != 5) throw ConfigError(context + ": key 'dist' must hold 5 coefficients [k1,k2,p1,p2,k3]");
    std::copy(d.begin(), d.end(), cam.dist.begin());
    cam.validate(context);
    return cam;
}

Json camera_to_json(const CameraModel& cam) {
    return Json{{"fx", cam.fx},       {"fy", cam.fy},           {"cx", cam.cx},
                {"cy", cam.cy},       {"width", cam.width},     {"height", cam.height},
                {"dist", std::vector<double>(cam.dist.begin(), cam.dist.end())}};
}

}  // namespace aqua
