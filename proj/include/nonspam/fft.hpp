#pragma once

#include <complex>

#include "nonspam/array2d.hpp"

namespace nonspam {

using Complex = std::complex<double>;
using RealArray = Array2D<double>;
using ComplexArray = Array2D<Complex>;

/// 2D DFT on the pixel torus.
///
/// Forward is unnormalized, inverse carries 1/n, so Parseval reads
/// sum |f|^2 = (1/n) sum |F|^2. Plans are created once per shape with
/// estimate-only planning, which keeps the chosen algorithm (and therefore
/// every output bit) independent of timing and thread count. All functions
/// are safe to call concurrently.
ComplexArray fft2(const RealArray& input);
ComplexArray fft2(const ComplexArray& input);
ComplexArray ifft2(const ComplexArray& input);

/// Real-input DFT holding only the non-redundant half: rows x (cols/2 + 1).
ComplexArray rfft2(const RealArray& input);

/// Inverse of rfft2 (with the 1/n factor) for an output of `cols` columns.
RealArray irfft2(const ComplexArray& half, std::size_t cols);

/// Buffer-reusing variants for hot loops: rfft2 into `out` (resized as
/// needed), and the unnormalized inverse (no 1/n) that overwrites `half`.
void rfft2_into(const RealArray& input, ComplexArray& out);
void irfft2_unscaled(ComplexArray& half, RealArray& out);

/// Inverse DFT keeping the real part. When `max_imag` is non-null it receives
/// the largest absolute imaginary residue.
RealArray ifft2_real(const ComplexArray& input, double* max_imag = nullptr);

}  // namespace nonspam
