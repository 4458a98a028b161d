#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ped/raster.hpp"

namespace ped {

// ---- PNG rasters ------------------------------------------------------
// Ground-truth rasters are single-channel 16-bit PNGs; 65535 is the
// ignore sentinel in label maps and 0 the background in instance maps.
// Anything else (8-bit, palette, RGB) is a FormatError.

LabelMap read_label_png(const std::filesystem::path& path);
InstanceMap read_instance_png(const std::filesystem::path& path);
void write_gray16_png(const std::filesystem::path& path, int width, int height,
                      const std::vector<std::uint16_t>& data);

// Single-channel 8-bit grayscale PNG decoded as value / 255 probabilities
// (the --quantized interchange path).
ProbMap read_gray8_prob_png(const std::filesystem::path& path);
void write_gray8_png(const std::filesystem::path& path, int width, int height,
                     const std::vector<std::uint8_t>& data);

// ---- PEDP probability maps --------------------------------------------
// Binary layout, little-endian: magic "PEDP", format version u16, K u16,
// H u32, W u32, then K*H*W float32 channel-major row-major.

inline constexpr std::uint16_t kPedpVersion = 1;

// Values outside [0,1]: RangeError in strict mode, clamped otherwise.
ProbMap read_prob_map(const std::filesystem::path& path, bool strict = true);
void write_prob_map(const std::filesystem::path& path, const ProbMap& map);

// ---- misc --------------------------------------------------------------

// Write-to-temp-then-rename, so readers never observe partial files.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string read_file(const std::filesystem::path& path);

// zlib CRC32 of a file's bytes, as 8 lowercase hex digits.
std::string file_crc32(const std::filesystem::path& path);

} // namespace ped
