#include "lfholo/fourier_plane.hpp"

#include <cmath>
#include <random>

#include "lfholo/io.hpp"

namespace lfholo {

FourierMask FourierMask::open() { return {}; }

FourierMask FourierMask::circular(const Aperture& aperture) {
    if (!(aperture.radius > 0.0)) {
        throw DomainError("FourierMask: aperture radius must be positive");
    }
    FourierMask m;
    m.mode = MaskMode::aperture;
    m.aperture = aperture;
    return m;
}

FourierMask FourierMask::fixed_random(int nx, int ny, std::uint64_t seed, double open_fraction) {
    if (nx < 1 || ny < 1) {
        throw DomainError("FourierMask: native resolution must be positive");
    }
    FourierMask m;
    m.mode = MaskMode::fixed_random;
    m.native_nx = nx;
    m.native_ny = ny;
    m.pattern.resize(static_cast<std::size_t>(nx) * ny);
    // Raw engine bits rather than a std distribution, so the pattern is the
    // same on every standard library.
    std::mt19937_64 engine(seed);
    for (double& v : m.pattern) {
        const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
        v = u < open_fraction ? 1.0 : 0.0;
    }
    return m;
}

FourierMask FourierMask::optimizable(int nx, int ny, double initial_logit) {
    if (nx < 1 || ny < 1) {
        throw DomainError("FourierMask: native resolution must be positive");
    }
    FourierMask m;
    m.mode = MaskMode::optimizable_lowres;
    m.native_nx = nx;
    m.native_ny = ny;
    m.logits.assign(static_cast<std::size_t>(nx) * ny, initial_logit);
    return m;
}

double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

std::vector<double> FourierMask::native_amplitudes() const {
    switch (mode) {
    case MaskMode::optimizable_lowres: {
        std::vector<double> a(logits.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = sigmoid(logits[i]);
        }
        return a;
    }
    case MaskMode::fixed_random:
        return pattern;
    case MaskMode::none:
    case MaskMode::aperture:
        break;
    }
    throw StructuralError("FourierMask: mode has no native block grid");
}

std::vector<int> block_edges(int n, int m) {
    if (m < 1 || m > n) {
        throw DomainError("block_edges: need 1 <= blocks <= samples");
    }
    std::vector<int> edges(m + 1);
    for (int b = 0; b <= m; ++b) {
        edges[b] = static_cast<int>(std::lround(static_cast<double>(b) * n / m));
    }
    return edges;
}

namespace {

// Block index of every centered sample along one axis.
std::vector<int> block_of_sample(int n, int m) {
    const std::vector<int> edges = block_edges(n, m);
    std::vector<int> owner(n);
    for (int b = 0; b < m; ++b) {
        for (int i = edges[b]; i < edges[b + 1]; ++i) {
            owner[i] = b;
        }
    }
    return owner;
}

// Block index for every DC-origin sample of the grid, row-major.
std::vector<int> block_map(int native_nx, int native_ny, const GridSpec& grid) {
    const std::vector<int> bx = block_of_sample(grid.nx, native_nx);
    const std::vector<int> by = block_of_sample(grid.ny, native_ny);
    std::vector<int> map(grid.size());
    for (int y = 0; y < grid.ny; ++y) {
        // DC-origin index y sits at centered index (y + ny/2) mod ny.
        const int cy = (y + grid.ny / 2) % grid.ny;
        for (int x = 0; x < grid.nx; ++x) {
            const int cx = (x + grid.nx / 2) % grid.nx;
            map[static_cast<std::size_t>(y) * grid.nx + x] = by[cy] * native_nx + bx[cx];
        }
    }
    return map;
}

} // namespace

FrequencyMask upsample_blocks(std::span<const double> native, int native_nx, int native_ny, const GridSpec& grid) {
    if (native.size() != static_cast<std::size_t>(native_nx) * native_ny) {
        throw StructuralError("upsample_blocks: native value count does not match resolution");
    }
    const std::vector<int> map = block_map(native_nx, native_ny, grid);
    FrequencyMask out(grid);
    auto v = out.values();
    for (std::size_t i = 0; i < map.size(); ++i) {
        v[i] = native[map[i]];
    }
    return out;
}

std::vector<double> block_sums(std::span<const double> values, int native_nx, int native_ny, const GridSpec& grid) {
    if (values.size() != grid.size()) {
        throw StructuralError("block_sums: value count does not match grid");
    }
    const std::vector<int> map = block_map(native_nx, native_ny, grid);
    std::vector<double> sums(static_cast<std::size_t>(native_nx) * native_ny, 0.0);
    for (std::size_t i = 0; i < map.size(); ++i) {
        sums[map[i]] += values[i];
    }
    return sums;
}

FrequencyMask disk_mask(const Aperture& disk, const GridSpec& grid) {
    const FrequencyAxes axes = freq_coords(grid);
    FrequencyMask out(grid);
    const double r2 = disk.radius * disk.radius;
    for (int y = 0; y < grid.ny; ++y) {
        const double dy = axes.fy[y] - disk.fy;
        for (int x = 0; x < grid.nx; ++x) {
            const double dx = axes.fx[x] - disk.fx;
            out(x, y) = dx * dx + dy * dy <= r2 ? 1.0 : 0.0;
        }
    }
    return out;
}

FrequencyMask realize_mask(const FourierMask& mask, const GridSpec& grid) {
    switch (mask.mode) {
    case MaskMode::none:
        return FrequencyMask(grid, 1.0);
    case MaskMode::aperture:
        return disk_mask(mask.aperture, grid);
    case MaskMode::fixed_random:
    case MaskMode::optimizable_lowres:
        return upsample_blocks(mask.native_amplitudes(), mask.native_nx, mask.native_ny, grid);
    }
    throw StructuralError("realize_mask: unknown mode");
}

std::vector<double> mask_logit_gradient(const FourierMask& mask, const GridSpec& grid, std::span<const double> dloss_dmask) {
    if (mask.mode != MaskMode::optimizable_lowres) {
        throw StructuralError("mask_logit_gradient: mask is not optimizable");
    }
    std::vector<double> g = block_sums(dloss_dmask, mask.native_nx, mask.native_ny, grid);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double s = sigmoid(mask.logits[i]);
        g[i] *= s * (1.0 - s);
    }
    return g;
}

double eyebox_to_freq(double x_e, double g, double wavelength) {
    if (!(g > 0.0) || !(wavelength > 0.0)) {
        throw DomainError("eyebox_to_freq: focal length and wavelength must be positive");
    }
    return x_e / (wavelength * g);
}

double freq_to_eyebox(double f, double g, double wavelength) {
    if (!(g > 0.0) || !(wavelength > 0.0)) {
        throw DomainError("freq_to_eyebox: focal length and wavelength must be positive");
    }
    return f * wavelength * g;
}

Aperture PupilSpec::in_frequency(double wavelength) const {
    return {eyebox_to_freq(cx, g, wavelength), eyebox_to_freq(cy, g, wavelength), eyebox_to_freq(radius, g, wavelength)};
}

PupilLayout PupilLayout::uniform(int views_per_axis, double eyebox_width, double radius, double g) {
    if (views_per_axis < 1) {
        throw DomainError("PupilLayout: need at least one view per axis");
    }
    if (!(radius > 0.0) || !(g > 0.0) || !(eyebox_width > 0.0)) {
        throw DomainError("PupilLayout: radius, focal length and eyebox width must be positive");
    }
    PupilLayout layout;
    layout.views_per_axis = views_per_axis;
    layout.eyebox_width = eyebox_width;
    const double step = eyebox_width / views_per_axis;
    const double mid = (views_per_axis - 1) / 2.0;
    for (int r = 0; r < views_per_axis; ++r) {
        for (int c = 0; c < views_per_axis; ++c) {
            layout.pupils.push_back({(c - mid) * step, (r - mid) * step, radius, g});
        }
    }
    return layout;
}

FrequencyMask pupil_mask(const PupilSpec& spec, const GridSpec& grid) {
    if (!(spec.radius > 0.0)) {
        throw DomainError("pupil_mask: radius must be positive");
    }
    FrequencyMask m = disk_mask(spec.in_frequency(grid.wavelength), grid);
    for (double v : m.values()) {
        if (v != 0.0) {
            return m;
        }
    }
    throw DomainError("pupil_mask: degenerate pupil, no frequency sample inside the disk");
}

void export_mask(std::span<const double> values, int nx, int ny, const std::filesystem::path& stem,
                 const std::string& kind) {
    auto with_ext = [&](const char* ext) {
        std::filesystem::path p = stem;
        p += ext;
        return p;
    };
    io::write_png_gray8(with_ext(".png"), nx, ny, io::to_gray8(values));
    io::write_f32(with_ext(".f32"), values);
    io::write_json(with_ext(".json"), {{"nx", nx}, {"ny", ny}, {"kind", kind}, {"order", "centered"}});
}

} // namespace lfholo
