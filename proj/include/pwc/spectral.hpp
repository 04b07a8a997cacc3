#pragma once

// One-dimensional numerics for the Paley-Wiener setting: transforms of box
// indicators, grid sampling, L^p quadrature with tail bounds, the pairing
// ∫ |f|^{p-2} f conj(g), and iterated indicator autoconvolutions.
//
// Fourier convention: F(f)(t) = ∫ f(x) e^{-2πi x t} dx. Discrete transforms
// carry the grid spacing so they approximate the continuum transform.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pwc/exactgeom.hpp"

namespace pwc {

using cplx = std::complex<double>;

/// Nodes x_j = -T + j h, j = 0..M-1, h = 2T/M, M a power of two.
struct Grid {
  double half_width = 64.0;
  std::size_t samples = std::size_t{1} << 17;

  static Grid make(double half_width, std::size_t samples);

  double spacing() const { return 2.0 * half_width / static_cast<double>(samples); }
  double node(std::size_t j) const { return -half_width + static_cast<double>(j) * spacing(); }
  /// The grid on which the discrete transform of this grid's samples lives:
  /// spacing 1/(2T), M nodes, symmetric about 0.
  Grid dual() const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Samples of a function on a grid. When present, the decay data certify
/// |f(x)| <= decay_constant / |x|^decay_exponent for |x| >= T, and
/// `bandwidth` certifies that the spectrum lies in [-bandwidth, bandwidth].
struct SampledFunction {
  Grid grid;
  std::vector<cplx> values;
  std::optional<double> decay_constant;
  double decay_exponent = 1.0;
  std::optional<double> bandwidth;
};

struct QuadratureResult {
  cplx value{0.0, 0.0};
  double tail_bound = 0.0;
  double discretization_estimate = 0.0;
  double rounding_bound = 0.0;  // floating-point error of the sums

  double uncertainty() const { return tail_bound + discretization_estimate + rounding_bound; }
};

/// F(χ_S)(x) in closed form, for S of any dimension (x.size() == S.dim()).
cplx ft_indicator(const BoxUnion& s, std::span<const double> x);
cplx ft_indicator(const BoxUnion& s, double x);

/// F(χ_S) on the grid with its decay constant (#boxes/π) and bandwidth.
SampledFunction sample_indicator_transform(const BoxUnion& s, const Grid& grid);

/// Samples an arbitrary callable on the grid (in parallel).
template <class Fn>
SampledFunction sample(const Grid& grid, Fn&& fn) {
  SampledFunction f;
  f.grid = grid;
  f.values.resize(grid.samples);
  const auto n = static_cast<std::ptrdiff_t>(grid.samples);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) f.values[static_cast<std::size_t>(j)] = fn(grid.node(static_cast<std::size_t>(j)));
  return f;
}

/// a f + b g on a shared grid. The decay bound uses the smaller exponent;
/// the bandwidth is kept only when both inputs carry one.
SampledFunction linear_combination(cplx a, const SampledFunction& f, cplx b, const SampledFunction& g);

/// ||f||_p on the line: trapezoid value over [-T, T], tail bound from the
/// decay data, discretization estimate from the M vs M/2 comparison. Both
/// bounds are reported on the scale of the norm. p = +inf gives the sup.
QuadratureResult lp_norm(const SampledFunction& f, double p);

/// ∫ |f|^{p-2} f conj(g) dx with the same uncertainty components.
QuadratureResult shapiro_pairing(const SampledFunction& f, const SampledFunction& g, double p);

/// Φ = χ_{S1}^{*k} * χ_{-S1}^{*(k-1)} on the frequency grid, computed by
/// zero-padded FFT convolution of cell-averaged indicators.
SampledFunction phi_on_grid(const BoxUnion& s1, unsigned k, const Grid& freq_grid);

/// Discrete approximation of F(f) on grid.dual().
SampledFunction fourier_transform(const SampledFunction& f);

/// Maximal runs of nodes in [lo, hi] with |F| > threshold, as [first, last]
/// node positions.
std::vector<std::pair<double, double>> support_scan(const SampledFunction& f, double threshold, double lo, double hi);

}  // namespace pwc
