#pragma once

#include <span>

#include "lfholo/field.hpp"

namespace lfholo::detail {

enum class FftDirection { forward, inverse };

/// Unitary in-place 2D transform of a row-major ny x nx buffer. Plans are
/// created once per (shape, direction, precision) and shared across threads.
void fft2(std::span<cplx> data, int nx, int ny, FftDirection direction, Precision precision);

/// Row-pruned variant of fft2. For an inverse transform `rows` marks the only
/// rows of the input that may be nonzero; for a forward transform it marks
/// the only output rows that are needed (the others are left unspecified).
void fft2_rows(std::span<cplx> data, int nx, int ny, FftDirection direction, Precision precision,
               std::span<const unsigned char> rows);

} // namespace lfholo::detail
