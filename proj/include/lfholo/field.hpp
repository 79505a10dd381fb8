#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "lfholo/error.hpp"

namespace lfholo {

using cplx = std::complex<double>;

/// Uniform sampling of a plane: pixel counts, physical pitch and the
/// wavelength of the light living on it.
struct GridSpec {
    int nx = 0;
    int ny = 0;
    double pitch_x = 0.0;
    double pitch_y = 0.0;
    double wavelength = 0.0;

    static GridSpec square(int n, double pitch, double wavelength) {
        return {n, n, pitch, pitch, wavelength};
    }

    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    double df_x() const { return 1.0 / (nx * pitch_x); }
    double df_y() const { return 1.0 / (ny * pitch_y); }

    /// Throws DomainError unless nx, ny >= 2 and pitches/wavelength are positive.
    void validate() const;

    bool operator==(const GridSpec&) const = default;
};

enum class Domain { spatial, frequency };

/// Sampled complex amplitude, row-major (index = y * nx + x). Frequency-domain
/// fields keep the spatial grid they were transformed from and store DC at
/// index (0, 0).
class ComplexField {
public:
    ComplexField() = default;
    explicit ComplexField(const GridSpec& grid, Domain domain = Domain::spatial);
    ComplexField(const GridSpec& grid, std::vector<cplx> values, Domain domain = Domain::spatial);

    const GridSpec& grid() const { return grid_; }
    Domain domain() const { return domain_; }
    std::span<cplx> values() { return values_; }
    std::span<const cplx> values() const { return values_; }
    std::size_t size() const { return values_.size(); }

    cplx& operator()(int x, int y) { return values_[static_cast<std::size_t>(y) * grid_.nx + x]; }
    const cplx& operator()(int x, int y) const { return values_[static_cast<std::size_t>(y) * grid_.nx + x]; }

private:
    GridSpec grid_{};
    Domain domain_ = Domain::spatial;
    std::vector<cplx> values_;
};

/// Real-valued samples on a grid. The tag keeps phases, amplitudes and masks
/// from being mixed up at call sites.
template <class Tag>
class RealArray {
public:
    RealArray() = default;
    explicit RealArray(const GridSpec& grid, double fill = 0.0) : grid_(grid), values_(grid.size(), fill) {
        grid_.validate();
    }
    RealArray(const GridSpec& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
        grid_.validate();
        if (values_.size() != grid_.size()) {
            throw StructuralError("RealArray: value count does not match grid");
        }
    }

    const GridSpec& grid() const { return grid_; }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }

    double& operator()(int x, int y) { return values_[static_cast<std::size_t>(y) * grid_.nx + x]; }
    double operator()(int x, int y) const { return values_[static_cast<std::size_t>(y) * grid_.nx + x]; }

    bool operator==(const RealArray&) const = default;

private:
    GridSpec grid_{};
    std::vector<double> values_;
};

/// Amplitude mask sampled on a frequency grid, DC at index (0, 0).
using FrequencyMask = RealArray<struct FrequencyMaskTag>;

/// Non-negative amplitude image at the image plane (one light-field view).
using ViewImage = RealArray<struct ViewImageTag>;

/// FFT arithmetic precision. f32 runs the transform kernel in single
/// precision; every other stage stays in double.
enum class Precision { f64, f32 };

/// Unitary 2D DFT (1/sqrt(N) on both directions). Requires a spatial field.
ComplexField dft2(const ComplexField& u, Precision precision = Precision::f64);
/// Inverse of dft2. Requires a frequency-domain field.
ComplexField idft2(const ComplexField& u, Precision precision = Precision::f64);

/// In-place unitary transforms on raw row-major buffers of nx * ny samples.
/// These are the hot-path entry points used by the forward model.
void dft2_inplace(std::span<cplx> data, int nx, int ny, Precision precision = Precision::f64);
void idft2_inplace(std::span<cplx> data, int nx, int ny, Precision precision = Precision::f64);

struct FrequencyAxes {
    std::vector<double> fx;  ///< cycles/m, DFT order: 0, df, ..., -df
    std::vector<double> fy;
};

/// Signed frequency of every sample along each axis in DC-at-origin order.
FrequencyAxes freq_coords(const GridSpec& grid);

/// Signed frequency index of DFT bin k on an axis of n samples.
constexpr int signed_bin(int k, int n) { return k < (n + 1) / 2 ? k : k - n; }

/// sum |u|^2 * pitch_x * pitch_y
double energy(const ComplexField& u);

/// <u, v> = sum conj(u) * v. Requires equal grids and domains.
cplx inner(const ComplexField& u, const ComplexField& v);

double norm(const ComplexField& u);

/// fftshift / ifftshift for row-major buffers: `center` moves DC to
/// (nx/2, ny/2), `uncenter` undoes it (also for odd sizes).
template <class T>
std::vector<T> center(std::span<const T> data, int nx, int ny);
template <class T>
std::vector<T> uncenter(std::span<const T> data, int nx, int ny);

ComplexField center(const ComplexField& u);
ComplexField uncenter(const ComplexField& u);

/// Circular shift: out(x + dx, y + dy) = in(x, y).
template <class T>
std::vector<T> circshift(std::span<const T> data, int nx, int ny, int dx, int dy);

} // namespace lfholo
