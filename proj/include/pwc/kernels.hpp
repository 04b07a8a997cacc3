#pragma once

// Data-parallel inner loops of the numerical layer. Every kernel exists in a
// plain serial form (the reference the tests compare against) and an OpenMP
// form. The OpenMP reductions use a fixed block partition summed in block
// order, so their results do not depend on the thread count.

#include <complex>
#include <cstddef>
#include <span>

namespace pwc::kernels {

using cplx = std::complex<double>;

struct Interval {
  double lo;
  double hi;
};

/// |z|^{p-2} z, taken as 0 at z = 0 for every p >= 1.
inline cplx signed_power(cplx z, double p) {
  const double n2 = std::norm(z);
  if (n2 == 0.0) return {0.0, 0.0};
  return std::pow(n2, 0.5 * (p - 2.0)) * z;
}

/// ∫_lo^hi e^{-2πi x t} dt in a cancellation-free form.
cplx interval_transform(const Interval& iv, double x);

/// Block count of the OpenMP reductions.
constexpr std::size_t kReductionBlocks = 64;

/// Worst-case error of a blocked sum of `count` terms, each carrying
/// `term_ops` rounded operations, given the sum of |term|.
double rounding_bound(std::size_t count, double term_ops, double abs_sum);

namespace serial {
/// sum over j = 0, stride, 2*stride, ... of |v_j|^p
double power_sum(std::span<const cplx> v, double p, std::size_t stride = 1);
/// sum over the same indices of |f_j|^{p-2} f_j conj(g_j)
cplx pairing_sum(std::span<const cplx> f, std::span<const cplx> g, double p, std::size_t stride = 1);
/// sum of |f_j|^{p-1} |g_j|
double pairing_abs_sum(std::span<const cplx> f, std::span<const cplx> g, double p, std::size_t stride = 1);
double max_abs(std::span<const cplx> v, std::size_t stride = 1);
/// out_j = sum over intervals of interval_transform(iv, x0 + j*h)
void sample_indicator_transform(std::span<const Interval> ivs, double x0, double h, std::span<cplx> out);
}  // namespace serial

namespace omp {
double power_sum(std::span<const cplx> v, double p, std::size_t stride = 1);
cplx pairing_sum(std::span<const cplx> f, std::span<const cplx> g, double p, std::size_t stride = 1);
/// sum of |f_j|^{p-1} |g_j|
double pairing_abs_sum(std::span<const cplx> f, std::span<const cplx> g, double p, std::size_t stride = 1);
double max_abs(std::span<const cplx> v, std::size_t stride = 1);
void sample_indicator_transform(std::span<const Interval> ivs, double x0, double h, std::span<cplx> out);
}  // namespace omp

/// Sets the OpenMP worker count (0 keeps the runtime default).
void set_threads(int n);

}  // namespace pwc::kernels
