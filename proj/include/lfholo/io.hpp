#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

#include "lfholo/field.hpp"

namespace lfholo::io {

using nlohmann::json;

/// Raw little-endian float32, row-major. Values are narrowed to float.
void write_f32(const std::filesystem::path& path, std::span<const double> values);

/// Reads exactly `count` float32 values; a short or long file raises IoError
/// stating how many bytes are missing or surplus.
std::vector<double> read_f32(const std::filesystem::path& path, std::size_t count);

/// 8-bit grayscale PNG, row-major `width * height` bytes.
void write_png_gray8(const std::filesystem::path& path, int width, int height, std::span<const std::uint8_t> pixels);

/// Maps [0, 1] values to 8 bits after optional display gamma (1 = linear).
std::vector<std::uint8_t> to_gray8(std::span<const double> values, double gamma = 1.0);

json read_json(const std::filesystem::path& path);
/// Pretty-printed JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const json& value);
void write_text(const std::filesystem::path& path, const std::string& text);

json grid_to_json(const GridSpec& grid);
GridSpec grid_from_json(const json& j);

} // namespace lfholo::io
