#pragma once

// Explicit counterexamples to contractivity: a pair (f, g) with f spectrally
// in S1, g spectrally in S2 and ||f + εg||_p < ||f||_p, certified with the
// quadrature uncertainty budgets of the spectral layer.

#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "pwc/criterion.hpp"
#include "pwc/exactgeom.hpp"
#include "pwc/rational.hpp"
#include "pwc/spectral.hpp"

namespace pwc {

enum class WitnessKind { EvenP, OddP, POne, PInf };
std::string to_string(WitnessKind k);

namespace recipe {

/// F(χ_S)(x).
struct IndicatorTransform {
  BoxUnion set;
};

/// h_N(scale * x).
struct DilatedH {
  unsigned n = 0;
  double scale = 1.0;
};

/// e^{iφ} e^{2πi center x} W_δ(x), where W_δ is the inverse transform of the
/// raised-cosine bump cos²(πt/(2δ)) on [-δ, δ].
struct ModulatedBump {
  double center = 0.0;
  double half_width = 0.0;
  double phase = 0.0;
};

/// e^{2πi center x} sin(2π radius x) / (2π radius x).
struct ModulatedSinc {
  double center = 0.0;
  double radius = 0.0;
};

}  // namespace recipe

/// Enough data to re-evaluate a witness function pointwise.
struct FunctionRecipe {
  std::variant<recipe::IndicatorTransform, recipe::DilatedH, recipe::ModulatedBump, recipe::ModulatedSinc> form;

  cplx evaluate(double x) const;
  /// |value| <= constant / |x|^exponent for |x| >= t0 (t0 > 0).
  std::pair<double, double> decay(double t0) const;
  /// Half-width of an interval centered at 0 containing the spectrum.
  double bandwidth() const;
  std::string name() const;
};

/// Frequencies of the witness frame map to the caller's frame by
/// ξ ↦ center + radius * ξ.
struct FrequencyFrame {
  double center = 0.0;
  double radius = 1.0;
};

struct Witness {
  WitnessKind kind = WitnessKind::EvenP;
  FunctionRecipe f;
  FunctionRecipe g;
  FrequencyFrame frame;
  double epsilon = 0.0;
  QuadratureResult norm_before;
  QuadratureResult norm_after;
  std::optional<QuadratureResult> pairing;
  std::optional<double> predicted_pairing;  // closed form, when available
  std::optional<double> support_point;      // x0 chosen in the spectrum of |h|^{p-2}h
  Grid grid;

  /// after + its uncertainty below before - its uncertainty.
  bool certified() const;
};

/// Samples a recipe on a grid with its decay bound and bandwidth attached.
SampledFunction sample_recipe(const FunctionRecipe& r, const Grid& grid);

/// f = F(χ_{S1}), g = F(χ_{S2}), ε = -sign(Re pairing) 2^{-j}.
Witness even_witness(const BoxUnion& s1, const BoxUnion& s2, unsigned k, const Grid& grid = {});

/// h(x) = (x²-1)(cos 2πx - cosh 2π) / ∏_{k=1}^{N} ((x+k)² + 1).
double h_function(unsigned n, double x);
double h_function(double p, double x);
/// Smallest integer N > 1/(2(p-1)) + 2.
unsigned n_threshold(double p);
/// ∫_{-T}^{T} |h|^{p-1} by the rectangle rule with `samples` nodes.
double h_power_integral(double p, double half_width, std::size_t samples);

/// Witness for a finite p >= 1 that is not even. I and J are disjoint
/// nondegenerate intervals given as (lo, hi).
Witness odd_witness(double p, std::pair<Rational, Rational> i, std::pair<Rational, Rational> j, const Grid& grid = {});

/// f a modulated sinc filling the largest box of S1, g = F(χ_{S2}), sup of
/// |f - εg| certified below 1 = ||f||_∞.
Witness inf_witness(const BoxUnion& s1, const BoxUnion& s2, const Grid& grid = {});

/// Dispatch on the exponent; S1 and S2 must be one-dimensional and the
/// pair must decide NotContractive.
Witness make_witness(const BoxUnion& s1, const BoxUnion& s2, const ExponentSpec& p, const Grid& grid = {});

}  // namespace pwc
