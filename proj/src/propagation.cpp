#include "lfholo/propagation.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

namespace lfholo {

bool is_propagating(double fx, double fy, double wavelength) {
    return std::hypot(fx, fy) < 1.0 / wavelength;
}

double asm_phase(double fx, double fy, double z, double wavelength) {
    const double lx = wavelength * fx;
    const double ly = wavelength * fy;
    // 1 - a^2 - b^2 written as (1 - a)(1 + a) - b^2 keeps precision near the cutoff.
    const double root = std::sqrt((1.0 - lx) * (1.0 + lx) - ly * ly);
    return 2.0 * std::numbers::pi / wavelength * z * root;
}

PropagationKernel make_kernel(const GridSpec& grid, double z) {
    if (!std::isfinite(z)) {
        throw DomainError("make_kernel: propagation distance must be finite");
    }
    const FrequencyAxes axes = freq_coords(grid);
    PropagationKernel kernel{grid, z, std::vector<cplx>(grid.size())};
    for (int y = 0; y < grid.ny; ++y) {
        for (int x = 0; x < grid.nx; ++x) {
            const double fx = axes.fx[x];
            const double fy = axes.fy[y];
            cplx h{0.0, 0.0};
            if (is_propagating(fx, fy, grid.wavelength)) {
                h = std::polar(1.0, asm_phase(fx, fy, z, grid.wavelength));
            }
            kernel.values[static_cast<std::size_t>(y) * grid.nx + x] = h;
        }
    }
    return kernel;
}

namespace {

ComplexField apply_transfer(const ComplexField& u, const PropagationKernel& kernel, bool conjugate,
                            Precision precision) {
    if (u.grid() != kernel.grid) {
        throw StructuralError("propagate: field grid does not match kernel grid");
    }
    if (u.domain() != Domain::spatial) {
        throw StructuralError("propagate: expects a spatial-domain field");
    }
    std::vector<cplx> buf(u.values().begin(), u.values().end());
    const int nx = u.grid().nx;
    const int ny = u.grid().ny;
    dft2_inplace(buf, nx, ny, precision);
    for (std::size_t i = 0; i < buf.size(); ++i) {
        buf[i] *= conjugate ? std::conj(kernel.values[i]) : kernel.values[i];
    }
    idft2_inplace(buf, nx, ny, precision);
    return ComplexField(u.grid(), std::move(buf));
}

} // namespace

ComplexField propagate(const ComplexField& u, const PropagationKernel& kernel, Precision precision) {
    return apply_transfer(u, kernel, false, precision);
}

ComplexField propagate_adjoint(const ComplexField& g, const PropagationKernel& kernel, Precision precision) {
    return apply_transfer(g, kernel, true, precision);
}

ComplexField band_limit(const ComplexField& u) {
    return propagate(u, *KernelCache::global().get(u.grid(), 0.0));
}

ComplexField propagate_padded(const ComplexField& u, double z, int pad_factor, Precision precision) {
    if (pad_factor < 1) {
        throw DomainError("propagate_padded: pad factor must be >= 1");
    }
    if (pad_factor == 1) {
        return propagate(u, *KernelCache::global().get(u.grid(), z), precision);
    }
    const GridSpec& g = u.grid();
    GridSpec padded = g;
    padded.nx = g.nx * pad_factor;
    padded.ny = g.ny * pad_factor;
    const int ox = (padded.nx - g.nx) / 2;
    const int oy = (padded.ny - g.ny) / 2;
    ComplexField big(padded);
    for (int y = 0; y < g.ny; ++y) {
        for (int x = 0; x < g.nx; ++x) {
            big(x + ox, y + oy) = u(x, y);
        }
    }
    const ComplexField out = propagate(big, *KernelCache::global().get(padded, z), precision);
    ComplexField cropped(g);
    for (int y = 0; y < g.ny; ++y) {
        for (int x = 0; x < g.nx; ++x) {
            cropped(x, y) = out(x + ox, y + oy);
        }
    }
    return cropped;
}

KernelCache& KernelCache::global() {
    static KernelCache cache;
    return cache;
}

std::shared_ptr<const PropagationKernel> KernelCache::get(const GridSpec& grid, double z) {
    const Key key{grid.nx, grid.ny, grid.pitch_x, grid.pitch_y, grid.wavelength, z};
    {
        std::shared_lock lock(mutex_);
        if (auto it = kernels_.find(key); it != kernels_.end()) {
            return it->second;
        }
    }
    auto kernel = std::make_shared<const PropagationKernel>(make_kernel(grid, z));
    std::unique_lock lock(mutex_);
    kernels_[key] = kernel;
    return kernel;
}

std::size_t KernelCache::size() const {
    std::shared_lock lock(mutex_);
    return kernels_.size();
}

void KernelCache::clear() {
    std::unique_lock lock(mutex_);
    kernels_.clear();
}

} // namespace lfholo
