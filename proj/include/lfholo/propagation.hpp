#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <tuple>

#include "lfholo/field.hpp"

namespace lfholo {

/// Angular-spectrum transfer function H(f_x, f_y; z) sampled on the DFT
/// frequency grid of `grid` (DC at index 0). Evanescent samples are zero.
struct PropagationKernel {
    GridSpec grid;
    double z = 0.0;
    std::vector<cplx> values;
};

/// Unwrapped phase (2 pi / lambda) z sqrt(1 - (lambda fx)^2 - (lambda fy)^2)
/// for a propagating frequency. Callers must check the band first.
double asm_phase(double fx, double fy, double z, double wavelength);

/// True when sqrt(fx^2 + fy^2) < 1 / lambda.
bool is_propagating(double fx, double fy, double wavelength);

PropagationKernel make_kernel(const GridSpec& grid, double z);

/// idft2(dft2(u) * H). Throws StructuralError on grid mismatch.
ComplexField propagate(const ComplexField& u, const PropagationKernel& kernel,
                       Precision precision = Precision::f64);

/// Exact adjoint of propagate: idft2(dft2(g) * conj(H)).
ComplexField propagate_adjoint(const ComplexField& g, const PropagationKernel& kernel,
                               Precision precision = Precision::f64);

/// Zeroes the evanescent part of the spectrum of u.
ComplexField band_limit(const ComplexField& u);

/// Propagates on a grid zero-padded by `pad_factor` per axis and crops the
/// centre back out. pad_factor == 1 is plain `propagate`.
ComplexField propagate_padded(const ComplexField& u, double z, int pad_factor = 1,
                              Precision precision = Precision::f64);

/// Process-wide cache of kernels keyed by (grid, z). Lookups and inserts are
/// safe from any thread; concurrent inserts of one key keep the last writer.
class KernelCache {
public:
    static KernelCache& global();

    std::shared_ptr<const PropagationKernel> get(const GridSpec& grid, double z);
    std::size_t size() const;
    void clear();

private:
    using Key = std::tuple<int, int, double, double, double, double>;

    KernelCache() = default;
    mutable std::shared_mutex mutex_;
    std::map<Key, std::shared_ptr<const PropagationKernel>> kernels_;
};

} // namespace lfholo
