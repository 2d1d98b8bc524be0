#pragma once

#include <string>
#include <vector>

#include "aquagrasp/camera.hpp"
#include "aquagrasp/image.hpp"

namespace aqua {

// Cross-camera plane-at-depth mapping: one source camera, one target camera,
// rigid transform (target -> source coordinates), and a fronto-parallel plane
// depth in the target frame.
struct WarpSpec {
    CameraModel source;
    CameraModel target;
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();
    double plane_depth = 1.0;  // meters

    void validate() const;
};

// Per-target-pixel source coordinates plus validity (in-bounds, in front of
// the source camera, undistortion converged).
struct RemapTable {
    int width = 0;   // target resolution
    int height = 0;
    int src_width = 0;   // source resolution; 0 = unknown (table loaded from cache)
    int src_height = 0;
    std::vector<float> map_u;
    std::vector<float> map_v;
    std::vector<uint8_t> valid;  // 1 byte per pixel in memory; packed bits on disk

    size_t index(int x, int y) const { return static_cast<size_t>(y) * width + x; }
};

enum class SampleMode { Bilinear, Nearest };

// Target-frame 3-D point -> source pixel (rigid transform then projection).
// Throws BehindCamera when the transformed point has non-positive depth.
Vec2 transform_and_project(const WarpSpec& spec, const Vec3& point_in_target);

// Composes undistort -> plane intersection -> transform -> project for every
// target pixel. Per-pixel failures are recorded in the valid mask, never thrown.
RemapTable build_remap_table(const WarpSpec& spec);

// Backward sampling through the table. Invalid pixels take `fill`.
ImageF remap_image(const RemapTable& table, const ImageF& image, float fill = 0.0f,
                   SampleMode mode = SampleMode::Bilinear);

// Calibration file: JSON with "source", "target", "rotation" (9 values,
// row-major), "translation" (3 values, meters), "plane_depth" (meters).
WarpSpec warp_spec_from_json(const Json& j, const std::string& context);
WarpSpec load_warp_spec(const std::string& path);
Json warp_spec_to_json(const WarpSpec& spec);

// Binary cache: header {magic "AQRT", version u32, width u32, height u32},
// then map_u, map_v as row-major little-endian float32, then valid as packed
// bits (row-major, LSB-first within each byte).
void save_remap_table(const std::string& path, const RemapTable& table);
RemapTable load_remap_table(const std::string& path);

}  // namespace aqua
