#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include "gph/grid.hpp"

namespace gph::fft {

// fft: FFTW lines, OpenMP over lines (production path)
// fft_serial: FFTW lines, single thread
// dft_direct: O(m^2) sum straight from the transform definition (reference)
enum class Backend { fft, fft_serial, dft_direct };

Backend& default_backend();

// Unprimed tensor axes carry e^{-ipx} forward / e^{+ipx} back; primed axes
// (second argument block of a kernel) use the conjugate convention.
enum class AxisKind { unprimed, primed };
enum class Dir { to_momentum, to_position };

// In-place transform along one axis of a row-major tensor whose axes all have
// extent m. Forward scales by h*(-1)^j per bin, inverse by (-1)^j/(2L), so the
// coefficients match the continuum convention on the lattice.
void transform_axis(cplx* data, const TensorShape& shape, int axis,
                    AxisKind kind, Dir dir, double halfwidth,
                    Backend backend);

void transform_axis(cplx* data, const TensorShape& shape, int axis,
                    AxisKind kind, Dir dir, double halfwidth);

// Multiply along one axis by a length-m table (entry j scaled by table[j]).
void scale_axis(cplx* data, const TensorShape& shape, int axis,
                std::span<const cplx> table);
void scale_axis(cplx* data, const TensorShape& shape, int axis,
                std::span<const double> table);

// Pointwise in-place multiply: data[i] *= factors[i].
void scale_pointwise(cplx* data, std::size_t n, const cplx* factors);
void scale_pointwise_serial(cplx* data, std::size_t n, const cplx* factors);

}  // namespace gph::fft
