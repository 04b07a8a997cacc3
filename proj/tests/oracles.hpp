#pragma once

// Reference computations that share no code with the library: cell
// rasterization on a common-denominator grid, B-spline integrals for the
// autoconvolution of χ_[0,1], and brute-force trigonometric sums.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "pwc/exactgeom.hpp"

namespace oracle {

/// A box with integer corners on the lattice (1/den) Z^d: cell i covers
/// [i/den, (i+1)/den] per axis.
struct IntBox {
  std::vector<long> lo;
  std::vector<long> hi;
};

struct Instance {
  std::size_t dim = 1;
  long den = 1;
  std::vector<IntBox> a;
  std::vector<IntBox> b;
};

using Cell = std::vector<long>;

inline std::set<Cell> cells(const std::vector<IntBox>& boxes) {
  std::set<Cell> out;
  for (const auto& b : boxes) {
    Cell c = b.lo;
    const std::size_t d = c.size();
    if (d == 0) continue;
    bool empty = false;
    for (std::size_t i = 0; i < d; ++i) empty = empty || b.lo[i] >= b.hi[i];
    if (empty) continue;
    while (true) {
      out.insert(c);
      std::size_t i = 0;
      while (i < d) {
        if (++c[i] < b.hi[i]) break;
        c[i] = b.lo[i];
        ++i;
      }
      if (i == d) break;
    }
  }
  return out;
}

/// measure = #cells / den^d, returned exactly.
inline mpq_class measure(const std::vector<IntBox>& boxes, std::size_t dim, long den) {
  mpz_class vol = 1;
  for (std::size_t i = 0; i < dim; ++i) vol *= den;
  mpq_class m(mpz_class(cells(boxes).size()), vol);
  m.canonicalize();
  return m;
}

inline mpq_class intersection_measure(const Instance& in) {
  const auto ca = cells(in.a);
  const auto cb = cells(in.b);
  std::size_t n = 0;
  for (const auto& c : ca) n += cb.count(c);
  mpz_class vol = 1;
  for (std::size_t i = 0; i < in.dim; ++i) vol *= in.den;
  mpq_class m(mpz_class(n), vol);
  m.canonicalize();
  return m;
}

/// Cells [i, i+1] + [j, j+1] = [i+j, i+j+2]: each pair of occupied cells
/// covers a 2^d block.
inline mpq_class minkowski_measure(const Instance& in) {
  const auto ca = cells(in.a);
  const auto cb = cells(in.b);
  std::set<Cell> sum;
  for (const auto& x : ca) {
    for (const auto& y : cb) {
      Cell base(in.dim);
      for (std::size_t i = 0; i < in.dim; ++i) base[i] = x[i] + y[i];
      for (unsigned mask = 0; mask < (1u << in.dim); ++mask) {
        Cell c = base;
        for (std::size_t i = 0; i < in.dim; ++i) c[i] += (mask >> i) & 1u;
        sum.insert(std::move(c));
      }
    }
  }
  mpz_class vol = 1;
  for (std::size_t i = 0; i < in.dim; ++i) vol *= in.den;
  mpq_class m(mpz_class(sum.size()), vol);
  m.canonicalize();
  return m;
}

inline pwc::BoxUnion to_union(const std::vector<IntBox>& boxes, std::size_t dim, long den) {
  std::vector<pwc::Box> out;
  for (const auto& b : boxes) {
    std::vector<pwc::Rational> lo, hi;
    for (std::size_t i = 0; i < dim; ++i) {
      lo.emplace_back(b.lo[i], den);
      hi.emplace_back(b.hi[i], den);
    }
    out.emplace_back(std::move(lo), std::move(hi));
  }
  return pwc::BoxUnion(dim, std::move(out));
}

/// Nondegenerate random boxes with endpoints in (1/den)Z. Side lengths are
/// kept short in three dimensions so the pairwise-cell oracle stays cheap.
inline Instance random_instance(std::mt19937_64& rng, std::size_t max_dim = 3, std::size_t max_boxes = 5, long max_den = 8) {
  Instance in;
  in.dim = std::uniform_int_distribution<std::size_t>(1, max_dim)(rng);
  in.den = std::uniform_int_distribution<long>(1, max_den)(rng);
  const long span = in.dim == 3 ? in.den : 2 * in.den;
  const long side = in.dim == 3 ? std::max(1L, in.den / 2) : in.den;
  auto make = [&](std::vector<IntBox>& v) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_boxes)(rng);
    for (std::size_t k = 0; k < n; ++k) {
      IntBox b;
      for (std::size_t i = 0; i < in.dim; ++i) {
        const long lo = std::uniform_int_distribution<long>(-span, span - 1)(rng);
        const long len = std::uniform_int_distribution<long>(1, side)(rng);
        b.lo.push_back(lo);
        b.hi.push_back(lo + len);
      }
      v.push_back(std::move(b));
    }
  };
  make(in.a);
  make(in.b);
  return in;
}

/// Shifts b along axis 0 so that it starts 0..2 units after a ends, which
/// keeps the two unions interior-disjoint.
inline void separate(Instance& in, std::mt19937_64& rng) {
  long a_max = in.a[0].hi[0], b_min = in.b[0].lo[0];
  for (const auto& b : in.a) a_max = std::max(a_max, b.hi[0]);
  for (const auto& b : in.b) b_min = std::min(b_min, b.lo[0]);
  const long gap = std::uniform_int_distribution<long>(0, 2 * in.den)(rng);
  for (auto& b : in.b) {
    b.lo[0] += a_max - b_min + gap;
    b.hi[0] += a_max - b_min + gap;
  }
}

inline mpz_class binomial(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline mpq_class power(const mpq_class& x, unsigned n) {
  mpq_class r = 1;
  for (unsigned i = 0; i < n; ++i) r *= x;
  return r;
}

/// ∫_{-∞}^{t} of the cardinal B-spline of degree n on [0, n+1]:
/// (1/(n+1)!) Σ_j (-1)^j C(n+1, j) (t - j)_+^{n+1}.
inline mpq_class bspline_cdf(unsigned n, const mpq_class& t) {
  mpq_class s = 0;
  for (unsigned j = 0; j <= n + 1; ++j) {
    const mpq_class u = t - j;
    if (u <= 0) continue;
    const mpq_class term = binomial(n + 1, j) * power(u, n + 1);
    s += (j % 2 == 0) ? term : mpq_class(-term);
  }
  mpz_class fact = 1;
  for (unsigned i = 2; i <= n + 1; ++i) fact *= i;
  return s / fact;
}

/// For S1 = [0,1]: Φ = χ^{*k} * χ_{[-1,0]}^{*(k-1)} is the degree 2k-2
/// B-spline shifted to [-(k-1), k]. Returns ∫_u^v Φ.
inline mpq_class unit_phi_integral(unsigned k, const mpq_class& u, const mpq_class& v) {
  const unsigned n = 2 * k - 2;
  const mpq_class shift = k - 1;
  return bspline_cdf(n, v + shift) - bspline_cdf(n, u + shift);
}

/// Mean of |q|^p over `samples` equispaced points of the period, by direct
/// summation of the trigonometric polynomial.
inline double direct_power_mean(const std::vector<std::pair<long, std::complex<double>>>& modes, double p, std::size_t samples) {
  double sum = 0.0;
  for (std::size_t j = 0; j < samples; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(samples);
    std::complex<double> q = 0.0;
    for (const auto& [m, a] : modes) q += a * std::polar(1.0, 2.0 * M_PI * static_cast<double>(m) * x);
    sum += std::pow(std::abs(q), p);
  }
  return sum / static_cast<double>(samples);
}

}  // namespace oracle
