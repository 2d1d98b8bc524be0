#include "aquagrasp/io.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>

namespace aqua {

uint64_t fnv1a64(const void* bytes, size_t n) {
    const auto* p = static_cast<const uint8_t*>(bytes);
    uint64_t h = 0xcbf29ce484222325ull;
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

uint64_t fnv1a64_file(const std::string& path) {
    const auto bytes = read_file_bytes(path);
    return fnv1a64(bytes.data(), bytes.size());
}

std::vector<uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    in.seekg(0, std::ios::end);
    const auto n = static_cast<size_t>(in.tellg());
    in.seekg(0, std::ios::beg);
    std::vector<uint8_t> bytes(n);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(n));
    if (!in) throw IoError("failed reading '" + path + "'");
    return bytes;
}

void write_file_bytes(const std::string& path, const void* bytes, size_t n) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(static_cast<const char*>(bytes), static_cast<std::streamsize>(n));
    if (!out) throw IoError("failed writing '" + path + "'");
}

void write_float_frame(const std::string& path, const ImageF& img, const Json& sidecar_extra) {
    static_assert(sizeof(float) == 4);
    write_file_bytes(path, img.data.data(), img.data.size() * sizeof(float));
    Json sidecar = sidecar_extra;
    sidecar["width"] = img.width;
    sidecar["height"] = img.height;
    sidecar["dtype"] = "float32le";
    sidecar["layout"] = "row-major";
    save_json_file(path + ".json", sidecar);
}

ImageF read_float_frame(const std::string& path) {
    const Json sidecar = load_json_file(path + ".json");
    const int w = get_as<int>(sidecar, "width", path + ".json");
    const int h = get_as<int>(sidecar, "height", path + ".json");
    const auto bytes = read_file_bytes(path);
    if (bytes.size() != static_cast<size_t>(w) * h * sizeof(float))
        throw IoError(path + ": size does not match sidecar resolution");
    ImageF img(w, h);
    std::memcpy(img.data.data(), bytes.data(), bytes.size());
    return img;
}

// ---------------------------------------------------------------------------
// Minimal PNG codec: 8-bit grayscale, one IDAT chunk, zlib level pinned so
// identical pixels always produce identical bytes.

namespace {

void put_u32_be(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

void append_chunk(std::vector<uint8_t>& out, const char type[4], const std::vector<uint8_t>& payload) {
    put_u32_be(out, static_cast<uint32_t>(payload.size()));
    const size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), payload.begin(), payload.end());
    const auto crc =
        crc32(0, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start));
    put_u32_be(out, static_cast<uint32_t>(crc));
}

}  // namespace

void write_png_gray8(const std::string& path, const ImageU8& img) {
    // Filter type 0 (none) on every scanline.
    std::vector<uint8_t> raw;
    raw.reserve(static_cast<size_t>(img.height) * (img.width + 1));
    for (int y = 0; y < img.height; ++y) {
        raw.push_back(0);
        const uint8_t* row = img.data.data() + static_cast<size_t>(y) * img.width;
        raw.insert(raw.end(), row, row + img.width);
    }

    uLongf comp_cap = compressBound(static_cast<uLong>(raw.size()));
    std::vector<uint8_t> compressed(comp_cap);
    if (compress2(compressed.data(), &comp_cap, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw IoError(path + ": zlib compression failed");
    compressed.resize(comp_cap);

    std::vector<uint8_t> png = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    std::vector<uint8_t> ihdr;
    put_u32_be(ihdr, static_cast<uint32_t>(img.width));
    put_u32_be(ihdr, static_cast<uint32_t>(img.height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(0);  // grayscale
    ihdr.push_back(0);  // deflate
    ihdr.push_back(0);  // filter method
    ihdr.push_back(0);  // no interlace
    append_chunk(png, "IHDR", ihdr);
    append_chunk(png, "IDAT", compressed);
    append_chunk(png, "IEND", {});
    write_file_bytes(path, png.data(), png.size());
}

namespace {

uint32_t get_u32_be(const uint8_t* p) {
    return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
           (static_cast<uint32_t>(p[2]) << 8) | static_cast<uint32_t>(p[3]);
}

}  // namespace

ImageU8 read_png_gray8(const std::string& path) {
    const auto bytes = read_file_bytes(path);
    if (bytes.size() < 8 || std::memcmp(bytes.data(), "\x89PNG\r\n\x1a\n", 8) != 0)
        throw IoError(path + ": not a PNG file");

    int width = 0, height = 0;
    std::vector<uint8_t> idat;
    size_t pos = 8;
    while (pos + 8 <= bytes.size()) {
        const uint32_t len = get_u32_be(&bytes[pos]);
        if (pos + 12 + len > bytes.size()) throw IoError(path + ": truncated PNG chunk");
        const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
        const uint8_t* payload = &bytes[pos + 8];
        if (std::memcmp(type, "IHDR", 4) == 0) {
            width = static_cast<int>(get_u32_be(payload));
            height = static_cast<int>(get_u32_be(payload + 4));
            if (payload[8] != 8 || payload[9] != 0)
                throw IoError(path + ": only 8-bit grayscale PNG is supported");
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), payload, payload + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            break;
        }
        pos += 12 + len;
    }
    if (width <= 0 || height <= 0) throw IoError(path + ": missing IHDR");

    const size_t raw_size = static_cast<size_t>(height) * (width + 1);
    std::vector<uint8_t> raw(raw_size);
    uLongf dest_len = static_cast<uLongf>(raw_size);
    if (uncompress(raw.data(), &dest_len, idat.data(), static_cast<uLong>(idat.size())) != Z_OK ||
        dest_len != raw_size)
        throw IoError(path + ": PNG inflate failed");

    ImageU8 img(width, height);
    for (int y = 0; y < height; ++y) {
        const uint8_t* row = &raw[static_cast<size_t>(y) * (width + 1)];
        const uint8_t filter = row[0];
        uint8_t* out_row = img.data.data() + static_cast<size_t>(y) * width;
        std::memcpy(out_row, row + 1, static_cast<size_t>(width));
        // Undo the two filters our writer and common encoders emit for
        // flat label content.
        if (filter == 1) {
            for (int x = 1; x < width; ++x) out_row[x] = static_cast<uint8_t>(out_row[x] + out_row[x - 1]);
        } else if (filter == 2 && y > 0) {
            const uint8_t* up = img.data.data() + static_cast<size_t>(y - 1) * width;
            for (int x = 0; x < width; ++x) out_row[x] = static_cast<uint8_t>(out_row[x] + up[x]);
        } else if (filter != 0) {
            throw IoError(path + ": unsupported PNG filter type " + std::to_string(filter));
        }
    }
    return img;
}

void write_pgm(const std::string& path, const ImageU8& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()), static_cast<std::streamsize>(img.size()));
    if (!out) throw IoError("failed writing '" + path + "'");
}

ImageU8 read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string magic;
    in >> magic;
    if (magic != "P5") throw IoError(path + ": not a binary PGM (P5) file");
    int w = 0, h = 0, maxval = 0;
    in >> w >> h >> maxval;
    if (!in || w <= 0 || h <= 0 || maxval != 255) throw IoError(path + ": unsupported PGM header");
    in.get();  // single whitespace after header
    ImageU8 img(w, h);
    in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.size()));
    if (!in) throw IoError(path + ": truncated PGM payload");
    return img;
}

}  // namespace aqua
