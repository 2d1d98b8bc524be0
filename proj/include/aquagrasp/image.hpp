#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "aquagrasp/errors.hpp"

namespace aqua {

// Row-major 2-D array. Pixel (x, y) = column x, row y; y grows downward.
template <typename T>
struct Image {
    int width = 0;
    int height = 0;
    std::vector<T> data;

    Image() = default;
    Image(int w, int h, T fill = T{}) : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

    T& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    const T& at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    size_t size() const { return data.size(); }

    bool operator==(const Image& other) const {
        return width == other.width && height == other.height && data == other.data;
    }
};

using ImageF = Image<float>;
using ImageU8 = Image<uint8_t>;

// Bilinear sample at fractional pixel coordinates. Caller guarantees the
// 2x2 support is in bounds (clamped here for the boundary row/column).
inline float sample_bilinear(const ImageF& img, float u, float v) {
    const int x0 = std::clamp(static_cast<int>(std::floor(u)), 0, img.width - 1);
    const int y0 = std::clamp(static_cast<int>(std::floor(v)), 0, img.height - 1);
    const int x1 = std::min(x0 + 1, img.width - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const float fx = std::clamp(u - static_cast<float>(x0), 0.0f, 1.0f);
    const float fy = std::clamp(v - static_cast<float>(y0), 0.0f, 1.0f);
    const float top = img.at(x0, y0) * (1.0f - fx) + img.at(x1, y0) * fx;
    const float bot = img.at(x0, y1) * (1.0f - fx) + img.at(x1, y1) * fx;
    return top * (1.0f - fy) + bot * fy;
}

inline float sample_nearest(const ImageF& img, float u, float v) {
    const int x = std::clamp(static_cast<int>(std::lround(u)), 0, img.width - 1);
    const int y = std::clamp(static_cast<int>(std::lround(v)), 0, img.height - 1);
    return img.at(x, y);
}

// Bilinear resize (separable, straightforward). Used for the 112x112
// training-resolution depth channels.
inline ImageF resize_bilinear(const ImageF& src, int out_w, int out_h) {
    if (src.width <= 0 || src.height <= 0) throw DimensionMismatch("resize_bilinear: empty source image");
    ImageF out(out_w, out_h);
    const float sx = static_cast<float>(src.width) / static_cast<float>(out_w);
    const float sy = static_cast<float>(src.height) / static_cast<float>(out_h);
    for (int y = 0; y < out_h; ++y) {
        // Map output pixel centers into source pixel-center coordinates.
        const float v = (static_cast<float>(y) + 0.5f) * sy - 0.5f;
        for (int x = 0; x < out_w; ++x) {
            const float u = (static_cast<float>(x) + 0.5f) * sx - 0.5f;
            out.at(x, y) = sample_bilinear(src, u, v);
        }
    }
    return out;
}

}  // namespace aqua
