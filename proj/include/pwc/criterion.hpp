#pragma once

// Contractivity of the canonical projection PW^p_{S1 ∪ S2} -> PW^p_{S1} for
// box-union spectra, decided exactly.

#include <optional>
#include <string>
#include <variant>

#include "pwc/exactgeom.hpp"
#include "pwc/rational.hpp"

namespace pwc {

/// Exponent classified exactly: p = 2k, any other finite p >= 1, or p = ∞.
class ExponentSpec {
 public:
  struct Even {
    unsigned k;
  };
  struct GeneralFinite {
    Rational p;
  };
  struct Infinity {};

  static ExponentSpec even(unsigned k);
  static ExponentSpec infinity() { return ExponentSpec(Infinity{}); }
  /// Classifies a rational p >= 1; p = 2k becomes Even(k).
  static ExponentSpec from_rational(const Rational& p);
  /// Accepts integers, "a/b", decimals and "inf"/"infinity".
  static ExponentSpec parse(const std::string& text);

  bool is_even() const { return std::holds_alternative<Even>(v_); }
  bool is_infinite() const { return std::holds_alternative<Infinity>(v_); }
  /// k for p = 2k; throws for other exponents.
  unsigned half() const;
  /// The finite value of p; throws for p = ∞.
  Rational value() const;
  double to_double() const;
  std::string to_string() const;

  friend bool operator==(const ExponentSpec& a, const ExponentSpec& b);

 private:
  using Variant = std::variant<Even, GeneralFinite, Infinity>;
  explicit ExponentSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

enum class Verdict { Contractive, NotContractive };
enum class DegenerateReason { S1Null, S2Null };

const char* to_string(Verdict v);
const char* to_string(DegenerateReason r);

struct Certificate {
  Verdict verdict = Verdict::NotContractive;
  std::optional<BoxUnion> condition_set;  // present for even p
  Rational obstruction_measure;            // mes(condition_set ∩ S2)
  std::optional<DegenerateReason> degenerate_reason;
  ExponentSpec exponent = ExponentSpec::even(1);
};

/// kS1 + (k-1)(-S1), normalized. Equal to S1 (as a point set) for k = 1.
BoxUnion condition_set(const BoxUnion& s1, unsigned k);

/// Throws DimensionMismatch or OverlapError when the standing hypotheses fail.
void check_hypotheses(const BoxUnion& s1, const BoxUnion& s2);

Certificate decide(const BoxUnion& s1, const BoxUnion& s2, const ExponentSpec& p);

struct EvenScan {
  std::optional<unsigned> max_k;  // largest contractive k <= cap
  bool saturated = false;         // no failure up to the cap
  std::vector<Rational> obstruction;  // obstruction measure for k = 1..scanned
};

constexpr unsigned kDefaultEvenCap = 64;

/// Scans p = 2, 4, ..., 2*k_cap and stops at the first non-contractive k.
EvenScan max_contractive_even_k(const BoxUnion& s1, const BoxUnion& s2, unsigned k_cap = kDefaultEvenCap);

}  // namespace pwc
