#include "lfholo/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

namespace lfholo::io {

static_assert(std::endian::native == std::endian::little, "raw float32 I/O assumes a little-endian host");

void write_f32(const std::filesystem::path& path, std::span<const double> values) {
    std::vector<float> buf(values.size());
    std::transform(values.begin(), values.end(), buf.begin(), [](double v) { return static_cast<float>(v); });
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!out) {
        throw IoError("short write to " + path.string());
    }
}

std::vector<double> read_f32(const std::filesystem::path& path, std::size_t count) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    in.seekg(0, std::ios::end);
    const auto size = static_cast<std::size_t>(in.tellg());
    in.seekg(0, std::ios::beg);
    const std::size_t expected = count * sizeof(float);
    if (size < expected) {
        throw IoError(path.string() + ": truncated, expected " + std::to_string(expected) + " bytes but found " +
                      std::to_string(size) + " (missing " + std::to_string(expected - size) + " bytes)");
    }
    if (size > expected) {
        throw IoError(path.string() + ": expected " + std::to_string(expected) + " bytes but found " +
                      std::to_string(size) + " (" + std::to_string(size - expected) + " surplus bytes)");
    }
    std::vector<float> buf(count);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(expected));
    if (!in) {
        throw IoError("read failed on " + path.string());
    }
    return {buf.begin(), buf.end()};
}

void write_png_gray8(const std::filesystem::path& path, int width, int height, std::span<const std::uint8_t> pixels) {
    if (pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw StructuralError("write_png_gray8: pixel count does not match dimensions");
    }
    std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.string().c_str(), "wb"), &std::fclose);
    if (!fp) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng initialisation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng failed writing " + path.string());
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < height; ++y) {
        png_write_row(png, const_cast<png_bytep>(pixels.data() + static_cast<std::size_t>(y) * width));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

std::vector<std::uint8_t> to_gray8(std::span<const double> values, double gamma) {
    std::vector<std::uint8_t> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        double v = std::clamp(values[i], 0.0, 1.0);
        if (gamma != 1.0) {
            v = std::pow(v, 1.0 / gamma);
        }
        out[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
    return out;
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out) {
        throw IoError("short write to " + path.string());
    }
}

void write_json(const std::filesystem::path& path, const json& value) { write_text(path, value.dump(2) + "\n"); }

json grid_to_json(const GridSpec& grid) {
    return {{"nx", grid.nx},
            {"ny", grid.ny},
            {"pitch_x", grid.pitch_x},
            {"pitch_y", grid.pitch_y},
            {"wavelength", grid.wavelength}};
}

GridSpec grid_from_json(const json& j) {
    try {
        GridSpec g{j.at("nx").get<int>(), j.at("ny").get<int>(), j.at("pitch_x").get<double>(),
                   j.at("pitch_y").get<double>(), j.at("wavelength").get<double>()};
        g.validate();
        return g;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed grid header: ") + e.what());
    }
}

} // namespace lfholo::io
