#include "pwc/truncated_power.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pwc {

namespace {

Rational factorial(unsigned n) {
  Rational r(1);
  for (unsigned i = 2; i <= n; ++i) r *= Rational(static_cast<long>(i));
  return r;
}

Rational power(const Rational& x, unsigned n) {
  mpq_class r(1);
  for (unsigned i = 0; i < n; ++i) r *= x.raw();
  return Rational(r);
}

}  // namespace

TruncatedPowerSum TruncatedPowerSum::indicator(const BoxUnion& s) {
  if (s.dim() != 1) throw std::invalid_argument("TruncatedPowerSum::indicator: one-dimensional set required");
  TruncatedPowerSum out;
  const BoxUnion n = normalize(s);
  for (const Box& b : n.boxes()) {
    if (b.degenerate()) continue;
    out.terms_.push_back({Rational(1), b.lo[0], 0});
    out.terms_.push_back({Rational(-1), b.hi[0], 0});
  }
  out.combine();
  return out;
}

TruncatedPowerSum TruncatedPowerSum::convolve(const TruncatedPowerSum& other) const {
  TruncatedPowerSum out;
  out.terms_.reserve(terms_.size() * other.terms_.size());
  for (const Term& x : terms_) {
    for (const Term& y : other.terms_) {
      const unsigned degree = x.degree + y.degree + 1;
      Rational c = x.coeff * y.coeff * factorial(x.degree) * factorial(y.degree) / factorial(degree);
      out.terms_.push_back({std::move(c), x.knot + y.knot, degree});
    }
  }
  out.combine();
  return out;
}

void TruncatedPowerSum::combine() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    return a.knot < b.knot;
  });
  std::vector<Term> merged;
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().degree == t.degree && merged.back().knot == t.knot) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coeff.sign() == 0; });
  terms_ = std::move(merged);
}

Rational TruncatedPowerSum::evaluate(const Rational& t) const {
  Rational v(0);
  for (const Term& term : terms_) {
    if (t < term.knot) continue;
    v += term.coeff * power(t - term.knot, term.degree);
  }
  return v;
}

double TruncatedPowerSum::evaluate(double t) const {
  // Exact evaluation avoids the cancellation of large truncated powers.
  return evaluate(Rational(mpq_class(t))).to_double();
}

Rational TruncatedPowerSum::integral(const Rational& u, const Rational& v) const {
  Rational total(0);
  for (const Term& term : terms_) {
    const unsigned n = term.degree + 1;
    Rational upper = term.knot < v ? power(v - term.knot, n) : Rational(0);
    Rational lower = term.knot < u ? power(u - term.knot, n) : Rational(0);
    total += term.coeff * (upper - lower) / Rational(static_cast<long>(n));
  }
  return total;
}

Rational TruncatedPowerSum::integral_over(const BoxUnion& s) const {
  if (s.dim() != 1) throw std::invalid_argument("TruncatedPowerSum::integral_over: one-dimensional set required");
  Rational total(0);
  const BoxUnion n = normalize(s);
  for (const Box& b : n.boxes()) {
    if (b.degenerate()) continue;
    total += integral(b.lo[0], b.hi[0]);
  }
  return total;
}

TruncatedPowerSum indicator_autoconvolution(const BoxUnion& s, unsigned k) {
  if (k == 0) throw std::invalid_argument("indicator_autoconvolution: k must be positive");
  const auto plus = TruncatedPowerSum::indicator(s);
  const auto minus = TruncatedPowerSum::indicator(reflect(s));
  TruncatedPowerSum acc = plus;
  for (unsigned i = 1; i < k; ++i) acc = acc.convolve(plus).convolve(minus);
  return acc;
}

}  // namespace pwc
