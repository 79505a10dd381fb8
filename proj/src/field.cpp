#include "lfholo/field.hpp"

#include <cmath>
#include <string>

#include "fft_engine.hpp"

namespace lfholo {

void GridSpec::validate() const {
    if (nx < 2 || ny < 2) {
        throw DomainError("GridSpec: nx and ny must be >= 2 (got " + std::to_string(nx) + "x" +
                          std::to_string(ny) + ")");
    }
    if (!(pitch_x > 0.0) || !(pitch_y > 0.0) || !std::isfinite(pitch_x) || !std::isfinite(pitch_y)) {
        throw DomainError("GridSpec: pitch must be positive and finite");
    }
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
        throw DomainError("GridSpec: wavelength must be positive and finite");
    }
}

ComplexField::ComplexField(const GridSpec& grid, Domain domain)
    : grid_(grid), domain_(domain), values_(grid.size()) {
    grid_.validate();
}

ComplexField::ComplexField(const GridSpec& grid, std::vector<cplx> values, Domain domain)
    : grid_(grid), domain_(domain), values_(std::move(values)) {
    grid_.validate();
    if (values_.size() != grid_.size()) {
        throw StructuralError("ComplexField: " + std::to_string(values_.size()) + " values for a " +
                              std::to_string(grid_.nx) + "x" + std::to_string(grid_.ny) + " grid");
    }
}

void dft2_inplace(std::span<cplx> data, int nx, int ny, Precision precision) {
    if (data.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny)) {
        throw StructuralError("dft2: buffer size does not match dimensions");
    }
    detail::fft2(data, nx, ny, detail::FftDirection::forward, precision);
}

void idft2_inplace(std::span<cplx> data, int nx, int ny, Precision precision) {
    if (data.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny)) {
        throw StructuralError("idft2: buffer size does not match dimensions");
    }
    detail::fft2(data, nx, ny, detail::FftDirection::inverse, precision);
}

ComplexField dft2(const ComplexField& u, Precision precision) {
    if (u.domain() != Domain::spatial) {
        throw StructuralError("dft2: input is already in the frequency domain");
    }
    ComplexField out(u.grid(), std::vector<cplx>(u.values().begin(), u.values().end()), Domain::frequency);
    dft2_inplace(out.values(), u.grid().nx, u.grid().ny, precision);
    return out;
}

ComplexField idft2(const ComplexField& u, Precision precision) {
    if (u.domain() != Domain::frequency) {
        throw StructuralError("idft2: input is not a frequency-domain field");
    }
    ComplexField out(u.grid(), std::vector<cplx>(u.values().begin(), u.values().end()), Domain::spatial);
    idft2_inplace(out.values(), u.grid().nx, u.grid().ny, precision);
    return out;
}

FrequencyAxes freq_coords(const GridSpec& grid) {
    grid.validate();
    FrequencyAxes axes;
    axes.fx.resize(grid.nx);
    axes.fy.resize(grid.ny);
    for (int k = 0; k < grid.nx; ++k) {
        axes.fx[k] = signed_bin(k, grid.nx) / (grid.nx * grid.pitch_x);
    }
    for (int k = 0; k < grid.ny; ++k) {
        axes.fy[k] = signed_bin(k, grid.ny) / (grid.ny * grid.pitch_y);
    }
    return axes;
}

double energy(const ComplexField& u) {
    double sum = 0.0;
    for (const cplx& v : u.values()) {
        sum += std::norm(v);
    }
    return sum * u.grid().pitch_x * u.grid().pitch_y;
}

cplx inner(const ComplexField& u, const ComplexField& v) {
    if (u.grid() != v.grid() || u.domain() != v.domain()) {
        throw StructuralError("inner: operands live on different grids or domains");
    }
    cplx sum{0.0, 0.0};
    auto a = u.values();
    auto b = v.values();
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += std::conj(a[i]) * b[i];
    }
    return sum;
}

double norm(const ComplexField& u) {
    double sum = 0.0;
    for (const cplx& v : u.values()) {
        sum += std::norm(v);
    }
    return std::sqrt(sum);
}

template <class T>
std::vector<T> circshift(std::span<const T> data, int nx, int ny, int dx, int dy) {
    if (data.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny)) {
        throw StructuralError("circshift: buffer size does not match dimensions");
    }
    std::vector<T> out(data.size());
    const int sx = ((dx % nx) + nx) % nx;
    const int sy = ((dy % ny) + ny) % ny;
    for (int y = 0; y < ny; ++y) {
        const int ty = (y + sy) % ny;
        const T* src = data.data() + static_cast<std::size_t>(y) * nx;
        T* dst = out.data() + static_cast<std::size_t>(ty) * nx;
        for (int x = 0; x < nx; ++x) {
            int tx = x + sx;
            if (tx >= nx) {
                tx -= nx;
            }
            dst[tx] = src[x];
        }
    }
    return out;
}

template <class T>
std::vector<T> center(std::span<const T> data, int nx, int ny) {
    return circshift(data, nx, ny, nx / 2, ny / 2);
}

template <class T>
std::vector<T> uncenter(std::span<const T> data, int nx, int ny) {
    return circshift(data, nx, ny, -(nx / 2), -(ny / 2));
}

ComplexField center(const ComplexField& u) {
    return ComplexField(u.grid(), center<cplx>(u.values(), u.grid().nx, u.grid().ny), u.domain());
}

ComplexField uncenter(const ComplexField& u) {
    return ComplexField(u.grid(), uncenter<cplx>(u.values(), u.grid().nx, u.grid().ny), u.domain());
}

template std::vector<double> circshift<double>(std::span<const double>, int, int, int, int);
template std::vector<cplx> circshift<cplx>(std::span<const cplx>, int, int, int, int);
template std::vector<float> circshift<float>(std::span<const float>, int, int, int, int);
template std::vector<int> circshift<int>(std::span<const int>, int, int, int, int);
template std::vector<double> center<double>(std::span<const double>, int, int);
template std::vector<cplx> center<cplx>(std::span<const cplx>, int, int);
template std::vector<int> center<int>(std::span<const int>, int, int);
template std::vector<double> uncenter<double>(std::span<const double>, int, int);
template std::vector<cplx> uncenter<cplx>(std::span<const cplx>, int, int);
template std::vector<int> uncenter<int>(std::span<const int>, int, int);

} // namespace lfholo
