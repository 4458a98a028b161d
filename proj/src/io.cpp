#include "ped/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <memory>

#include <png.h>
#include <zlib.h>

namespace ped {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f)
            std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f)
        throw IoError("cannot open " + path.string());
    return f;
}

// Decoded 16- or 8-bit grayscale PNG. Rows are assembled manually so the
// libpng error path (setjmp) never unwinds past objects with destructors.
struct GrayPng {
    int width = 0;
    int height = 0;
    int bit_depth = 0;
    std::vector<std::uint16_t> pixels; // 8-bit values widen into u16
};

GrayPng read_gray_png(const std::filesystem::path& path) {
    FilePtr file = open_file(path, "rb");

    png_byte header[8];
    if (std::fread(header, 1, 8, file.get()) != 8 || png_sig_cmp(header, 0, 8) != 0)
        throw FormatError(path.string() + ": not a PNG file");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("libpng initialization failed");
    }

    GrayPng out;
    std::vector<png_byte> row;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError(path.string() + ": corrupt PNG data");
    }

    png_init_io(png, file.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.bit_depth = png_get_bit_depth(png, info);
    const int color = png_get_color_type(png, info);
    if (color != PNG_COLOR_TYPE_GRAY || (out.bit_depth != 8 && out.bit_depth != 16)) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError(path.string() + ": expected single-channel 8- or 16-bit grayscale PNG");
    }

    out.pixels.resize(static_cast<std::size_t>(out.width) * out.height);
    row.resize(png_get_rowbytes(png, info));
    for (int y = 0; y < out.height; ++y) {
        png_read_row(png, row.data(), nullptr);
        std::uint16_t* dst = out.pixels.data() + static_cast<std::size_t>(y) * out.width;
        if (out.bit_depth == 16) {
            for (int x = 0; x < out.width; ++x) // PNG is big-endian
                dst[x] = static_cast<std::uint16_t>((row[2 * x] << 8) | row[2 * x + 1]);
        } else {
            for (int x = 0; x < out.width; ++x)
                dst[x] = row[static_cast<std::size_t>(x)];
        }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

} // namespace

LabelMap read_label_png(const std::filesystem::path& path) {
    GrayPng png = read_gray_png(path);
    if (png.bit_depth != 16)
        throw FormatError(path.string() + ": label rasters must be 16-bit grayscale");
    LabelMap out(png.width, png.height);
    out.data = std::move(png.pixels);
    return out;
}

InstanceMap read_instance_png(const std::filesystem::path& path) {
    GrayPng png = read_gray_png(path);
    if (png.bit_depth != 16)
        throw FormatError(path.string() + ": instance rasters must be 16-bit grayscale");
    InstanceMap out(png.width, png.height);
    out.data = std::move(png.pixels);
    return out;
}

ProbMap read_gray8_prob_png(const std::filesystem::path& path) {
    GrayPng png = read_gray_png(path);
    if (png.bit_depth != 8)
        throw FormatError(path.string() + ": quantized probability PNG must be 8-bit grayscale");
    ProbMap out(1, png.width, png.height);
    for (std::size_t i = 0; i < png.pixels.size(); ++i)
        out.values[i] = static_cast<float>(png.pixels[i]) / 255.0f;
    return out;
}

namespace {

void write_gray_png(const std::filesystem::path& path, int width, int height, int bit_depth,
                    const std::function<void(int, png_byte*)>& fill_row) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        FilePtr file = open_file(tmp, "wb");
        png_structp png =
            png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        png_infop info = png ? png_create_info_struct(png) : nullptr;
        if (!png || !info) {
            png_destroy_write_struct(&png, &info);
            throw IoError("libpng initialization failed");
        }
        std::vector<png_byte> row(static_cast<std::size_t>(width) * (bit_depth / 8));
        if (setjmp(png_jmpbuf(png))) {
            png_destroy_write_struct(&png, &info);
            throw IoError(path.string() + ": PNG write failed");
        }
        png_init_io(png, file.get());
        png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
                     bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                     PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        for (int y = 0; y < height; ++y) {
            fill_row(y, row.data());
            png_write_row(png, row.data());
        }
        png_write_end(png, nullptr);
        png_destroy_write_struct(&png, &info);
    }
    std::filesystem::rename(tmp, path);
}

} // namespace

void write_gray16_png(const std::filesystem::path& path, int width, int height,
                      const std::vector<std::uint16_t>& data) {
    if (data.size() != static_cast<std::size_t>(width) * height)
        throw ShapeError("write_gray16_png: data size does not match dimensions");
    write_gray_png(path, width, height, 16, [&](int y, png_byte* row) {
        const std::uint16_t* src = data.data() + static_cast<std::size_t>(y) * width;
        for (int x = 0; x < width; ++x) { // PNG is big-endian
            row[2 * static_cast<std::size_t>(x)] = static_cast<png_byte>(src[x] >> 8);
            row[2 * static_cast<std::size_t>(x) + 1] = static_cast<png_byte>(src[x] & 0xff);
        }
    });
}

void write_gray8_png(const std::filesystem::path& path, int width, int height,
                     const std::vector<std::uint8_t>& data) {
    if (data.size() != static_cast<std::size_t>(width) * height)
        throw ShapeError("write_gray8_png: data size does not match dimensions");
    write_gray_png(path, width, height, 8, [&](int y, png_byte* row) {
        const std::uint8_t* src = data.data() + static_cast<std::size_t>(y) * width;
        std::copy(src, src + width, row);
    });
}

namespace {

template <typename T>
void put_le(std::string& out, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i)
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

template <typename T>
T get_le(const std::string& in, std::size_t& pos) {
    if (pos + sizeof(T) > in.size())
        throw FormatError("probability map file truncated");
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        v |= static_cast<T>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
    pos += sizeof(T);
    return v;
}

} // namespace

ProbMap read_prob_map(const std::filesystem::path& path, bool strict) {
    const std::string bytes = read_file(path);
    if (bytes.size() < 4 || std::memcmp(bytes.data(), "PEDP", 4) != 0)
        throw FormatError(path.string() + ": bad magic, not a PEDP file");
    std::size_t pos = 4;
    const auto version = get_le<std::uint16_t>(bytes, pos);
    if (version != kPedpVersion)
        throw FormatError(path.string() + ": unsupported PEDP version "
                          + std::to_string(version));
    const auto k = get_le<std::uint16_t>(bytes, pos);
    const auto h = get_le<std::uint32_t>(bytes, pos);
    const auto w = get_le<std::uint32_t>(bytes, pos);
    const std::size_t n = static_cast<std::size_t>(k) * h * w;
    if (bytes.size() - pos != n * 4)
        throw FormatError(path.string() + ": payload size does not match header");

    ProbMap out(static_cast<int>(k), static_cast<int>(w), static_cast<int>(h));
    for (std::size_t i = 0; i < n; ++i) {
        const auto u = get_le<std::uint32_t>(bytes, pos);
        float f;
        std::memcpy(&f, &u, 4);
        if (!(f >= 0.0f && f <= 1.0f)) {
            if (strict)
                throw RangeError(path.string() + ": probability value out of [0,1]");
            f = f < 0.0f || std::isnan(f) ? 0.0f : 1.0f;
        }
        out.values[i] = f;
    }
    return out;
}

void write_prob_map(const std::filesystem::path& path, const ProbMap& map) {
    std::string bytes;
    bytes.reserve(16 + map.values.size() * 4);
    bytes.append("PEDP");
    put_le<std::uint16_t>(bytes, kPedpVersion);
    put_le<std::uint16_t>(bytes, static_cast<std::uint16_t>(map.channels));
    put_le<std::uint32_t>(bytes, static_cast<std::uint32_t>(map.height));
    put_le<std::uint32_t>(bytes, static_cast<std::uint32_t>(map.width));
    for (float f : map.values) {
        std::uint32_t u;
        std::memcpy(&u, &f, 4);
        put_le<std::uint32_t>(bytes, u);
    }
    write_file_atomic(path, bytes);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out)
            throw IoError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad())
        throw IoError("read failed: " + path.string());
    return bytes;
}

std::string file_crc32(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    const auto crc = crc32_z(0, reinterpret_cast<const Bytef*>(bytes.data()), bytes.size());
    char buf[9];
    std::snprintf(buf, sizeof(buf), "%08lx", static_cast<unsigned long>(crc));
    return buf;
}

} // namespace ped
