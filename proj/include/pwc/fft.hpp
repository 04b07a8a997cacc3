#pragma once

#include <complex>
#include <span>

namespace pwc::fft {

enum class Direction { Forward, Backward };

/// Unnormalized in-place DFT of arbitrary length via FFTW.
/// Forward: X_m = sum_j x_j e^{-2 pi i j m / N}; Backward uses e^{+...}.
/// Safe to call concurrently; plans are cached per (length, direction).
void transform(std::span<std::complex<double>> data, Direction dir);

/// Smallest power of two >= n (n >= 1).
std::size_t next_pow2(std::size_t n);

}  // namespace pwc::fft
