#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aquagrasp/image.hpp"
#include "aquagrasp/json_util.hpp"

namespace aqua {

// 64-bit FNV-1a, the manifest checksum.
uint64_t fnv1a64(const void* bytes, size_t n);
uint64_t fnv1a64_file(const std::string& path);

// Raw little-endian float32 frame with a JSON sidecar carrying resolution,
// units, and timestamp. <path> holds the data, <path>.json the sidecar.
void write_float_frame(const std::string& path, const ImageF& img, const Json& sidecar_extra = Json::object());
ImageF read_float_frame(const std::string& path);

// 8-bit grayscale PNG (label images for masks). Deterministic byte stream:
// fixed zlib level, no timestamps or ancillary chunks.
void write_png_gray8(const std::string& path, const ImageU8& img);
ImageU8 read_png_gray8(const std::string& path);

// Binary PGM (P5), used by the warp CLI for 8-bit images.
void write_pgm(const std::string& path, const ImageU8& img);
ImageU8 read_pgm(const std::string& path);

std::vector<uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const void* bytes, size_t n);

}  // namespace aqua
