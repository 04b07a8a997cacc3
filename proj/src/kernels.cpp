#include "pwc/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace pwc::kernels {

namespace {

constexpr std::size_t kBlocks = kReductionBlocks;

// Index range [begin, end) of block b when `count` strided samples are split
// into kBlocks contiguous pieces.
std::pair<std::size_t, std::size_t> block_range(std::size_t count, std::size_t b) {
  return {count * b / kBlocks, count * (b + 1) / kBlocks};
}

std::size_t strided_count(std::size_t n, std::size_t stride) { return n == 0 ? 0 : (n - 1) / stride + 1; }

}  // namespace

cplx interval_transform(const Interval& iv, double x) {
  const double len = iv.hi - iv.lo;
  const double phase = -std::numbers::pi * (iv.lo + iv.hi) * x;
  double amplitude;
  if (std::abs(x) < 1e-8) {
    const double t = std::numbers::pi * len * x;
    amplitude = len * (1.0 - t * t / 6.0);
  } else {
    amplitude = std::sin(std::numbers::pi * len * x) / (std::numbers::pi * x);
  }
  return std::polar(1.0, phase) * amplitude;
}

double rounding_bound(std::size_t count, double term_ops, double abs_sum) {
  const double u = std::numeric_limits<double>::epsilon() / 2.0;
  const double depth = static_cast<double>((count + kBlocks - 1) / kBlocks + kBlocks) + term_ops;
  return depth * u * abs_sum;
}

namespace serial {

double power_sum(std::span<const cplx> v, double p, std::size_t stride) {
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); j += stride) s += std::pow(std::norm(v[j]), 0.5 * p);
  return s;
}

cplx pairing_sum(std::span<const cplx> f, std::span<const cplx> g, double p, std::size_t stride) {
  cplx s = 0.0;
  for (std::size_t j = 0; j < f.size(); j += stride) s += signed_power(f[j], p) * std::conj(g[j]);
  return s;
}

double pairing_abs_sum(std::span<const cplx> f, std::span<const cplx> g, double p, std::size_t stride) {
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); j += stride) s += std::pow(std::norm(f[j]), 0.5 * (p - 1.0)) * std::abs(g[j]);
  return s;
}

double max_abs(std::span<const cplx> v, std::size_t stride) {
  double m = 0.0;
  for (std::size_t j = 0; j < v.size(); j += stride) m = std::max(m, std::abs(v[j]));
  return m;
}

void sample_indicator_transform(std::span<const Interval> ivs, double x0, double h, std::span<cplx> out) {
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double x = x0 + static_cast<double>(j) * h;
    cplx acc = 0.0;
    for (const auto& iv : ivs) acc += interval_transform(iv, x);
    out[j] = acc;
  }
}

}  // namespace serial

namespace omp {

double power_sum(std::span<const cplx> v, double p, std::size_t stride) {
  const std::size_t count = strided_count(v.size(), stride);
  std::array<double, kBlocks> partial{};
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < kBlocks; ++b) {
    const auto [first, last] = block_range(count, b);
    double s = 0.0;
    for (std::size_t i = first; i < last; ++i) s += std::pow(std::norm(v[i * stride]), 0.5 * p);
    partial[b] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

cplx pairing_sum(std::span<const cplx> f, std::span<const cplx> g, double p, std::size_t stride) {
  const std::size_t count = strided_count(f.size(), stride);
  std::array<cplx, kBlocks> partial{};
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < kBlocks; ++b) {
    const auto [first, last] = block_range(count, b);
    cplx s = 0.0;
    for (std::size_t i = first; i < last; ++i) s += signed_power(f[i * stride], p) * std::conj(g[i * stride]);
    partial[b] = s;
  }
  cplx total = 0.0;
  for (const cplx& s : partial) total += s;
  return total;
}

double pairing_abs_sum(std::span<const cplx> f, std::span<const cplx> g, double p, std::size_t stride) {
  const std::size_t count = strided_count(f.size(), stride);
  std::array<double, kBlocks> partial{};
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < kBlocks; ++b) {
    const auto [first, last] = block_range(count, b);
    double s = 0.0;
    for (std::size_t i = first; i < last; ++i) s += std::pow(std::norm(f[i * stride]), 0.5 * (p - 1.0)) * std::abs(g[i * stride]);
    partial[b] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

double max_abs(std::span<const cplx> v, std::size_t stride) {
  const std::size_t count = strided_count(v.size(), stride);
  std::array<double, kBlocks> partial{};
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < kBlocks; ++b) {
    const auto [first, last] = block_range(count, b);
    double m = 0.0;
    for (std::size_t i = first; i < last; ++i) m = std::max(m, std::abs(v[i * stride]));
    partial[b] = m;
  }
  return *std::max_element(partial.begin(), partial.end());
}

void sample_indicator_transform(std::span<const Interval> ivs, double x0, double h, std::span<cplx> out) {
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const double x = x0 + static_cast<double>(j) * h;
    cplx acc = 0.0;
    for (const auto& iv : ivs) acc += interval_transform(iv, x);
    out[static_cast<std::size_t>(j)] = acc;
  }
}

}  // namespace omp

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace pwc::kernels
