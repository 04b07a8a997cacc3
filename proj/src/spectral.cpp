#include "pwc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pwc/errors.hpp"
#include "pwc/fft.hpp"
#include "pwc/kernels.hpp"

namespace pwc {

namespace {

std::vector<kernels::Interval> positive_intervals(const BoxUnion& s) {
  if (s.dim() != 1) throw std::invalid_argument("one-dimensional set required, got dimension " + std::to_string(s.dim()));
  std::vector<kernels::Interval> out;
  const BoxUnion n = normalize(s);
  for (const Box& b : n.boxes()) {
    if (!b.degenerate()) out.push_back({b.lo[0].to_double(), b.hi[0].to_double()});
  }
  return out;
}

// Bounds on x -> (I + e)^{1/p} - I^{1/p} and the downward counterpart.
double root_shift_up(double integral, double err, double p) {
  return std::pow(integral + err, 1.0 / p) - std::pow(integral, 1.0 / p);
}

double root_shift_down(double integral, double err, double p) {
  return std::pow(integral, 1.0 / p) - std::pow(std::max(integral - err, 0.0), 1.0 / p);
}

void require_decay(const SampledFunction& f, const char* who) {
  if (!f.decay_constant) throw MissingDecayBound(std::string(who) + ": sampled function has no decay bound");
  if (*f.decay_constant < 0.0) throw std::invalid_argument(std::string(who) + ": negative decay constant");
}

}  // namespace

Grid Grid::make(double half_width, std::size_t samples) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw std::invalid_argument("Grid: half width must be positive");
  if (samples < 2 || (samples & (samples - 1)) != 0) {
    throw std::invalid_argument("Grid: sample count must be a power of two >= 2");
  }
  return Grid{half_width, samples};
}

Grid Grid::dual() const {
  return Grid{static_cast<double>(samples) / (4.0 * half_width), samples};
}

cplx ft_indicator(const BoxUnion& s, std::span<const double> x) {
  if (x.size() != s.dim()) throw DimensionMismatch("ft_indicator: point dimension does not match the set");
  const BoxUnion n = normalize(s);
  cplx total = 0.0;
  for (const Box& b : n.boxes()) {
    if (b.degenerate()) continue;
    cplx term = 1.0;
    for (std::size_t i = 0; i < s.dim(); ++i) {
      term *= kernels::interval_transform({b.lo[i].to_double(), b.hi[i].to_double()}, x[i]);
    }
    total += term;
  }
  return total;
}

cplx ft_indicator(const BoxUnion& s, double x) { return ft_indicator(s, std::span<const double>(&x, 1)); }

SampledFunction sample_indicator_transform(const BoxUnion& s, const Grid& grid) {
  const auto ivs = positive_intervals(s);
  SampledFunction f;
  f.grid = grid;
  f.values.resize(grid.samples);
  kernels::omp::sample_indicator_transform(ivs, grid.node(0), grid.spacing(), f.values);
  f.decay_constant = static_cast<double>(ivs.size()) / std::numbers::pi;
  double band = 0.0;
  for (const auto& iv : ivs) band = std::max({band, std::abs(iv.lo), std::abs(iv.hi)});
  f.bandwidth = band;
  return f;
}

SampledFunction linear_combination(cplx a, const SampledFunction& f, cplx b, const SampledFunction& g) {
  if (!(f.grid == g.grid)) throw GridMismatch("linear_combination: functions live on different grids");
  if (f.values.size() != g.values.size()) throw GridMismatch("linear_combination: value count mismatch");
  SampledFunction out;
  out.grid = f.grid;
  out.values.resize(f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) out.values[i] = a * f.values[i] + b * g.values[i];
  if (f.decay_constant && g.decay_constant) {
    const double alpha = std::min(f.decay_exponent, g.decay_exponent);
    const double T = f.grid.half_width;
    out.decay_exponent = alpha;
    out.decay_constant = std::abs(a) * *f.decay_constant * std::pow(T, alpha - f.decay_exponent) +
                         std::abs(b) * *g.decay_constant * std::pow(T, alpha - g.decay_exponent);
  }
  if (f.bandwidth && g.bandwidth) out.bandwidth = std::max(*f.bandwidth, *g.bandwidth);
  return out;
}

QuadratureResult lp_norm(const SampledFunction& f, double p) {
  if (f.values.size() != f.grid.samples) throw GridMismatch("lp_norm: value count does not match the grid");
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const double h = f.grid.spacing();
  const double T = f.grid.half_width;
  QuadratureResult r;

  if (std::isinf(p)) {
    require_decay(f, "lp_norm");
    const double m = kernels::omp::max_abs(f.values);
    r.value = m;
    r.tail_bound = *f.decay_constant / std::pow(T, f.decay_exponent);
    if (f.bandwidth) {
      // |f|^2 has spectrum in [-2B, 2B]; Bernstein bounds its curvature near
      // the true maximum, which lies within h/2 of a node.
      const double q = 2.0 * std::numbers::pi * std::numbers::pi * (*f.bandwidth) * (*f.bandwidth) * h * h;
      r.discretization_estimate = q < 1.0 ? m * (1.0 / std::sqrt(1.0 - q) - 1.0) : std::numeric_limits<double>::infinity();
    } else {
      r.discretization_estimate = std::abs(m - kernels::omp::max_abs(f.values, 2));
    }
    return r;
  }

  require_decay(f, "lp_norm");
  const double decay_power = f.decay_exponent * p;
  if (!(decay_power > 1.0)) {
    throw MissingDecayBound("lp_norm: decay |x|^-" + std::to_string(f.decay_exponent) +
                            " does not make |f|^p integrable for p = " + std::to_string(p));
  }
  const double fine = h * kernels::omp::power_sum(f.values, p, 1);
  const double coarse = 2.0 * h * kernels::omp::power_sum(f.values, p, 2);
  const double c = *f.decay_constant;
  // Two half-lines beyond T plus the endpoint cell the periodic sum misses.
  const double tail = 2.0 * std::pow(c, p) / ((decay_power - 1.0) * std::pow(T, decay_power - 1.0)) +
                      h * std::pow(c, p) / std::pow(T, decay_power);
  const double disc = std::abs(fine - coarse);
  r.value = std::pow(fine, 1.0 / p);
  r.tail_bound = root_shift_up(fine, tail, p);
  r.discretization_estimate = std::max(root_shift_up(fine, disc, p), root_shift_down(fine, disc, p));
  // Sampled values carry a few ulps each; |.|^p scales that by p.
  const double rounding = kernels::rounding_bound(f.values.size(), p + 8.0, fine);
  r.rounding_bound = std::max(root_shift_up(fine, rounding, p), root_shift_down(fine, rounding, p));
  return r;
}

QuadratureResult shapiro_pairing(const SampledFunction& f, const SampledFunction& g, double p) {
  if (!(f.grid == g.grid)) throw GridMismatch("shapiro_pairing: functions live on different grids");
  if (f.values.size() != g.values.size() || f.values.size() != f.grid.samples) {
    throw GridMismatch("shapiro_pairing: value count does not match the grid");
  }
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("shapiro_pairing: p must be finite and >= 1");
  require_decay(f, "shapiro_pairing");
  require_decay(g, "shapiro_pairing");
  const double h = f.grid.spacing();
  const double T = f.grid.half_width;
  const double decay_power = f.decay_exponent * (p - 1.0) + g.decay_exponent;
  if (!(decay_power > 1.0)) {
    throw MissingDecayBound("shapiro_pairing: integrand tail is not summable for p = " + std::to_string(p));
  }
  const cplx fine = h * kernels::omp::pairing_sum(f.values, g.values, p, 1);
  const cplx coarse = 2.0 * h * kernels::omp::pairing_sum(f.values, g.values, p, 2);
  const double c = std::pow(*f.decay_constant, p - 1.0) * (*g.decay_constant);
  QuadratureResult r;
  r.value = fine;
  r.tail_bound = 2.0 * c / ((decay_power - 1.0) * std::pow(T, decay_power - 1.0)) + h * c / std::pow(T, decay_power);
  r.discretization_estimate = std::abs(fine - coarse);
  r.rounding_bound = kernels::rounding_bound(f.values.size(), p + 8.0, h * kernels::omp::pairing_abs_sum(f.values, g.values, p));
  return r;
}

SampledFunction phi_on_grid(const BoxUnion& s1, unsigned k, const Grid& freq_grid) {
  if (k == 0) throw std::invalid_argument("phi_on_grid: k must be positive");
  const auto ivs = positive_intervals(s1);
  const double h = freq_grid.spacing();
  SampledFunction out;
  out.grid = freq_grid;
  out.values.assign(freq_grid.samples, 0.0);
  if (ivs.empty()) return out;

  // Cell averages of χ_S on the lattice hZ: c_n = |S ∩ [nh - h/2, nh + h/2]| / h.
  double lo = ivs.front().lo, hi = ivs.front().hi;
  for (const auto& iv : ivs) {
    lo = std::min(lo, iv.lo);
    hi = std::max(hi, iv.hi);
  }
  const auto n0 = static_cast<long>(std::floor(lo / h)) - 1;
  const auto n1 = static_cast<long>(std::ceil(hi / h)) + 1;
  const auto len = static_cast<std::size_t>(n1 - n0 + 1);
  std::vector<double> plus(len, 0.0);
  for (std::size_t i = 0; i < len; ++i) {
    const double a = (static_cast<double>(n0 + static_cast<long>(i)) - 0.5) * h;
    const double b = a + h;
    for (const auto& iv : ivs) plus[i] += std::max(0.0, std::min(b, iv.hi) - std::max(a, iv.lo)) / h;
  }
  // Reflection: entry i of `minus` sits at lattice index -n1 + i.
  std::vector<double> minus(plus.rbegin(), plus.rend());

  const std::size_t factors = 2 * k - 1;
  const std::size_t out_len = factors * (len - 1) + 1;
  const std::size_t n = fft::next_pow2(out_len);
  std::vector<cplx> a(n, 0.0), b(n, 0.0);
  std::copy(plus.begin(), plus.end(), a.begin());
  std::copy(minus.begin(), minus.end(), b.begin());
  fft::transform(a, fft::Direction::Forward);
  fft::transform(b, fft::Direction::Forward);
  const double scale = std::pow(h, static_cast<double>(factors - 1)) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = std::pow(a[i], static_cast<int>(k)) * std::pow(b[i], static_cast<int>(k - 1)) * scale;
  }
  fft::transform(a, fft::Direction::Backward);

  const long offset = static_cast<long>(k) * n0 - static_cast<long>(k - 1) * n1;
  const long half = static_cast<long>(freq_grid.samples / 2);
  for (std::size_t i = 0; i < out_len; ++i) {
    const long j = offset + static_cast<long>(i) + half;
    if (j >= 0 && j < static_cast<long>(freq_grid.samples)) out.values[static_cast<std::size_t>(j)] = a[i];
  }
  return out;
}

SampledFunction fourier_transform(const SampledFunction& f) {
  if (f.values.size() != f.grid.samples) throw GridMismatch("fourier_transform: value count does not match the grid");
  const std::size_t m = f.grid.samples;
  std::vector<cplx> buf = f.values;
  fft::transform(buf, fft::Direction::Forward);
  SampledFunction out;
  out.grid = f.grid.dual();
  out.values.resize(m);
  const double h = f.grid.spacing();
  const long half = static_cast<long>(m / 2);
  for (std::size_t i = 0; i < m; ++i) {
    // ξ_i = (i - M/2) / (2T); the node offset -T contributes (-1)^{i - M/2}.
    const long shift = static_cast<long>(i) - half;
    const std::size_t src = static_cast<std::size_t>((shift % static_cast<long>(m) + static_cast<long>(m)) % static_cast<long>(m));
    const double sign = (shift % 2 == 0) ? 1.0 : -1.0;
    out.values[i] = sign * h * buf[src];
  }
  return out;
}

std::vector<std::pair<double, double>> support_scan(const SampledFunction& f, double threshold, double lo, double hi) {
  if (!(threshold > 0.0)) throw std::invalid_argument("support_scan: threshold must be positive");
  std::vector<std::pair<double, double>> runs;
  bool open = false;
  double first = 0.0, last = 0.0;
  for (std::size_t j = 0; j < f.values.size(); ++j) {
    const double x = f.grid.node(j);
    const bool inside = x >= lo && x <= hi && std::abs(f.values[j]) > threshold;
    if (inside) {
      if (!open) first = x;
      last = x;
      open = true;
    } else if (open) {
      runs.emplace_back(first, last);
      open = false;
    }
  }
  if (open) runs.emplace_back(first, last);
  return runs;
}

}  // namespace pwc
