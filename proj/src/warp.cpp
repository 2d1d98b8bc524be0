#include "aquagrasp/warp.hpp"

#include <cstring>
#include <fstream>

namespace aqua {

void WarpSpec::validate() const {
    source.validate("warp.source");
    target.validate("warp.target");
    const Mat3 should_be_identity = rotation * rotation.transpose();
    if ((should_be_identity - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9 ||
        std::abs(rotation.determinant() - 1.0) > 1e-9)
        throw ConfigError("warp.rotation: not orthonormal with determinant +1");
    if (plane_depth <= 0.0) throw InvalidDepth("warp.plane_depth: must be positive");
}

Vec2 transform_and_project(const WarpSpec& spec, const Vec3& point_in_target) {
    const Vec3 in_source = spec.rotation * point_in_target + spec.translation;
    return spec.source.project_point(in_source);
}

RemapTable build_remap_table(const WarpSpec& spec) {
    spec.validate();
    RemapTable table;
    table.width = spec.target.width;
    table.height = spec.target.height;
    table.src_width = spec.source.width;
    table.src_height = spec.source.height;
    const size_t n = static_cast<size_t>(table.width) * table.height;
    table.map_u.assign(n, 0.0f);
    table.map_v.assign(n, 0.0f);
    table.valid.assign(n, 0);

    for (int y = 0; y < table.height; ++y) {
        for (int x = 0; x < table.width; ++x) {
            const size_t idx = table.index(x, y);
            try {
                const Vec2 normalized = spec.target.undistort_pixel({static_cast<double>(x), static_cast<double>(y)});
                const Vec3 on_plane = ray_plane_point(normalized, spec.plane_depth);
                const Vec2 src_px = transform_and_project(spec, on_plane);
                // Tolerate sub-ulp excursions below zero at the image border,
                // clamping so valid entries stay inside [0, size).
                constexpr double kEdgeEps = 1e-6;
                if (src_px.x() > -kEdgeEps && src_px.x() < spec.source.width && src_px.y() > -kEdgeEps &&
                    src_px.y() < spec.source.height) {
                    table.map_u[idx] = static_cast<float>(std::max(0.0, src_px.x()));
                    table.map_v[idx] = static_cast<float>(std::max(0.0, src_px.y()));
                    table.valid[idx] = 1;
                }
            } catch (const NonConvergent&) {
            } catch (const BehindCamera&) {
            }
        }
    }
    return table;
}

ImageF remap_image(const RemapTable& table, const ImageF& image, float fill, SampleMode mode) {
    if (table.src_width > 0 && (image.width != table.src_width || image.height != table.src_height))
        throw DimensionMismatch("remap_image: image is " + std::to_string(image.width) + "x" +
                                std::to_string(image.height) + " but the table's source camera is " +
                                std::to_string(table.src_width) + "x" + std::to_string(table.src_height));
    ImageF out(table.width, table.height, fill);
    for (int y = 0; y < table.height; ++y) {
        for (int x = 0; x < table.width; ++x) {
            const size_t idx = table.index(x, y);
            if (!table.valid[idx]) continue;
            const float u = table.map_u[idx];
            const float v = table.map_v[idx];
            if (u < 0.0f || u >= static_cast<float>(image.width) || v < 0.0f ||
                v >= static_cast<float>(image.height))
                throw DimensionMismatch("remap_image: image dimensions do not match the table's source camera");
            out.at(x, y) = mode == SampleMode::Bilinear ? sample_bilinear(image, u, v)
                                                        : sample_nearest(image, u, v);
        }
    }
    return out;
}

WarpSpec warp_spec_from_json(const Json& j, const std::string& context) {
    WarpSpec spec;
    spec.source = camera_from_json(require_key(j, "source", context), context + ".source");
    spec.target = camera_from_json(require_key(j, "target", context), context + ".target");
    const auto r = get_as<std::vector<double>>(j, "rotation", context);
    if (r.size() != 9) throw ConfigError(context + ": key 'rotation' must hold 9 values, row-major");
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) spec.rotation(i, k) = r[static_cast<size_t>(i) * 3 + k];
    const auto t = get_as<std::vector<double>>(j, "translation", context);
    if (t.size() != 3) throw ConfigError(context + ": key 'translation' must hold 3 values (meters)");
    spec.translation = Vec3(t[0], t[1], t[2]);
    spec.plane_depth = get_as<double>(j, "plane_depth", context);
    spec.validate();
    return spec;
}

WarpSpec load_warp_spec(const std::string& path) {
    return warp_spec_from_json(load_json_file(path), path);
}

Json warp_spec_to_json(const WarpSpec& spec) {
    std::vector<double> r(9);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) r[static_cast<size_t>(i) * 3 + k] = spec.rotation(i, k);
    return Json{{"source", camera_to_json(spec.source)},
                {"target", camera_to_json(spec.target)},
                {"rotation", r},
                {"translation", {spec.translation.x(), spec.translation.y(), spec.translation.z()}},
                {"plane_depth", spec.plane_depth}};
}

namespace {

constexpr char kMagic[4] = {'A', 'Q', 'R', 'T'};
constexpr uint32_t kVersion = 1;

void write_u32(std::ofstream& out, uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

uint32_t read_u32(std::ifstream& in) {
    uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

}  // namespace

void save_remap_table(const std::string& path, const RemapTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(kMagic, 4);
    write_u32(out, kVersion);
    write_u32(out, static_cast<uint32_t>(table.width));
    write_u32(out, static_cast<uint32_t>(table.height));
    const size_t n = table.map_u.size();
    out.write(reinterpret_cast<const char*>(table.map_u.data()), static_cast<std::streamsize>(n * 4));
    out.write(reinterpret_cast<const char*>(table.map_v.data()), static_cast<std::streamsize>(n * 4));
    std::vector<uint8_t> packed((n + 7) / 8, 0);
    for (size_t i = 0; i < n; ++i)
        if (table.valid[i]) packed[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
    out.write(reinterpret_cast<const char*>(packed.data()), static_cast<std::streamsize>(packed.size()));
    if (!out) throw IoError("failed writing '" + path + "'");
}

RemapTable load_remap_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw IoError(path + ": bad remap-table magic");
    const uint32_t version = read_u32(in);
    if (version != kVersion) throw IoError(path + ": unsupported remap-table version " + std::to_string(version));
    RemapTable table;
    table.width = static_cast<int>(read_u32(in));
    table.height = static_cast<int>(read_u32(in));
    const size_t n = static_cast<size_t>(table.width) * table.height;
    table.map_u.resize(n);
    table.map_v.resize(n);
    in.read(reinterpret_cast<char*>(table.map_u.data()), static_cast<std::streamsize>(n * 4));
    in.read(reinterpret_cast<char*>(table.map_v.data()), static_cast<std::streamsize>(n * 4));
    std::vector<uint8_t> packed((n + 7) / 8);
    in.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(packed.size()));
    if (!in) throw IoError(path + ": truncated remap table");
    table.valid.assign(n, 0);
    for (size_t i = 0; i < n; ++i)
        table.valid[i] = (packed[i / 8] >> (i % 8)) & 1u;
    return table;
}

}  // namespace aqua
