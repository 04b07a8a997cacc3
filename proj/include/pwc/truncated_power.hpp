#pragma once

// Exact piecewise polynomials on the line written as finite sums of
// truncated powers c * (t - knot)_+^degree. Convolution of two such sums is
// closed-form, which gives exact iterated convolutions of interval
// indicators.

#include <vector>

#include "pwc/exactgeom.hpp"
#include "pwc/rational.hpp"

namespace pwc {

class TruncatedPowerSum {
 public:
  struct Term {
    Rational coeff;
    Rational knot;
    unsigned degree = 0;
  };

  TruncatedPowerSum() = default;

  /// Indicator of a one-dimensional box union (overlaps counted once).
  static TruncatedPowerSum indicator(const BoxUnion& s);

  TruncatedPowerSum convolve(const TruncatedPowerSum& other) const;

  /// Pointwise value; at a knot the right limit is taken.
  Rational evaluate(const Rational& t) const;
  double evaluate(double t) const;

  /// Exact integral over [u, v].
  Rational integral(const Rational& u, const Rational& v) const;
  /// Exact integral over a one-dimensional box union.
  Rational integral_over(const BoxUnion& s) const;

  const std::vector<Term>& terms() const { return terms_; }

 private:
  void combine();
  std::vector<Term> terms_;
};

/// χ_S^{*k} * χ_{-S}^{*(k-1)}, the function whose transform is f^k conj(f)^{k-1}
/// for f the transform of χ_S.
TruncatedPowerSum indicator_autoconvolution(const BoxUnion& s, unsigned k);

}  // namespace pwc
