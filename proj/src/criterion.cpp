#include "pwc/criterion.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "pwc/errors.hpp"

namespace pwc {

ExponentSpec ExponentSpec::even(unsigned k) {
  if (k == 0) throw std::invalid_argument("ExponentSpec: Even(k) needs k >= 1");
  return ExponentSpec(Even{k});
}

ExponentSpec ExponentSpec::from_rational(const Rational& p) {
  if (p < Rational(1)) throw std::invalid_argument("exponent p must satisfy p >= 1, got " + p.to_string());
  if (p.is_integer()) {
    const mpz_class n = p.numerator();
    if (n % 2 == 0) {
      if (!n.fits_uint_p() || n / 2 > 1000000) throw std::invalid_argument("exponent too large: " + p.to_string());
      return ExponentSpec(Even{static_cast<unsigned>(n.get_ui() / 2)});
    }
  }
  return ExponentSpec(GeneralFinite{p});
}

ExponentSpec ExponentSpec::parse(const std::string& text) {
  std::string lower;
  for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "inf" || lower == "infinity" || lower == "+inf") return infinity();
  return from_rational(Rational::parse(text));
}

unsigned ExponentSpec::half() const {
  if (const auto* e = std::get_if<Even>(&v_)) return e->k;
  throw std::logic_error("ExponentSpec::half: exponent is not an even integer");
}

Rational ExponentSpec::value() const {
  if (const auto* e = std::get_if<Even>(&v_)) return Rational(2L * e->k);
  if (const auto* g = std::get_if<GeneralFinite>(&v_)) return g->p;
  throw std::logic_error("ExponentSpec::value: exponent is infinite");
}

double ExponentSpec::to_double() const {
  if (is_infinite()) return std::numeric_limits<double>::infinity();
  return value().to_double();
}

std::string ExponentSpec::to_string() const {
  if (is_infinite()) return "inf";
  return value().to_string();
}

bool operator==(const ExponentSpec& a, const ExponentSpec& b) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
  return a.value() == b.value();
}

const char* to_string(Verdict v) { return v == Verdict::Contractive ? "Contractive" : "NotContractive"; }

const char* to_string(DegenerateReason r) { return r == DegenerateReason::S1Null ? "S1 null" : "S2 null"; }

BoxUnion condition_set(const BoxUnion& s1, unsigned k) {
  if (k == 0) throw std::invalid_argument("condition_set: k must be positive");
  return difference_sums(s1, k).back();
}

void check_hypotheses(const BoxUnion& s1, const BoxUnion& s2) {
  if (s1.dim() != s2.dim()) {
    throw DimensionMismatch("S1 has dimension " + std::to_string(s1.dim()) + " but S2 has dimension " +
                            std::to_string(s2.dim()));
  }
  const Rational overlap = intersection_measure(s1, s2);
  if (overlap.sign() > 0) {
    throw OverlapError("mes(S1 ∩ S2) = " + overlap.to_string() + " > 0; the sets must be disjoint up to measure zero");
  }
}

namespace {

Certificate even_certificate(BoxUnion cond, const BoxUnion& s2, unsigned k) {
  Certificate c;
  c.exponent = ExponentSpec::even(k);
  c.obstruction_measure = intersection_measure(cond, s2);
  c.verdict = c.obstruction_measure.sign() == 0 ? Verdict::Contractive : Verdict::NotContractive;
  c.condition_set = std::move(cond);
  return c;
}

}  // namespace

Certificate decide(const BoxUnion& s1, const BoxUnion& s2, const ExponentSpec& p) {
  check_hypotheses(s1, s2);
  if (p.is_even()) return even_certificate(condition_set(s1, p.half()), s2, p.half());

  Certificate c;
  c.exponent = p;
  c.obstruction_measure = Rational(0);
  if (measure(s1).sign() == 0) {
    c.degenerate_reason = DegenerateReason::S1Null;
  } else if (measure(s2).sign() == 0) {
    c.degenerate_reason = DegenerateReason::S2Null;
  }
  c.verdict = c.degenerate_reason ? Verdict::Contractive : Verdict::NotContractive;
  return c;
}

EvenScan max_contractive_even_k(const BoxUnion& s1, const BoxUnion& s2, unsigned k_cap) {
  if (k_cap == 0) throw std::invalid_argument("max_contractive_even_k: k_cap must be positive");
  check_hypotheses(s1, s2);
  EvenScan scan;
  if (measure(s2).sign() == 0) {
    // mes(C ∩ S2) <= mes(S2) = 0 for every k.
    scan.obstruction.assign(k_cap, Rational(0));
    scan.max_k = k_cap;
    scan.saturated = true;
    return scan;
  }
  DifferenceSumSequence sets(s1);
  for (unsigned k = 1; k <= k_cap; ++k) {
    if (k > 1) sets.advance();
    Rational m = intersection_measure(sets.current(), s2);
    const bool ok = m.sign() == 0;
    scan.obstruction.push_back(std::move(m));
    if (!ok) return scan;
    scan.max_k = k;
  }
  scan.saturated = true;
  return scan;
}

}  // namespace pwc
