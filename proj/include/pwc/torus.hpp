#pragma once

// Discrete model: spectra on the lattice (1/L)Z, the canonical projection as
// coefficient truncation, exact even-p norms of the resulting trigonometric
// polynomials, randomized contraction trials and an L-BFGS lower
// bound on the norm of the projection.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "pwc/exactgeom.hpp"
#include "pwc/rational.hpp"

namespace pwc::torus {

using cplx = std::complex<double>;

enum class Band { S1, S2 };

struct LatticeMode {
  std::int64_t index;  // frequency index / L
  Band band;
  cplx amplitude;
};

/// q(x) = sum_m a_m e^{2πi m x / L}, modes sorted by index.
struct LatticeSpectrum {
  Rational period{1};
  std::vector<LatticeMode> modes;
};

/// All integers m with m/L in S (closed boxes, exact comparisons). d = 1.
std::vector<std::int64_t> lattice_points(const BoxUnion& s, const Rational& period);
/// Integers m with m/L in the interior of some box of S.
std::vector<std::int64_t> interior_lattice_points(const BoxUnion& s, const Rational& period);

/// Index sets of the model. S1 indices come from the closed boxes of S1; S2
/// indices from the interiors of S2's boxes, minus any S1 index.
class LatticeModel {
 public:
  LatticeModel(const BoxUnion& s1, const BoxUnion& s2, Rational period);

  const Rational& period() const { return period_; }
  const std::vector<std::int64_t>& s1_indices() const { return s1_; }
  const std::vector<std::int64_t>& s2_indices() const { return s2_; }
  std::size_t size() const { return s1_.size() + s2_.size(); }

  /// Coefficients ordered as s1_indices() followed by s2_indices().
  LatticeSpectrum spectrum(std::span<const cplx> coeffs) const;
  /// Independent standard complex Gaussian coefficients.
  std::vector<cplx> random_coefficients(std::uint64_t seed, std::uint64_t stream) const;

 private:
  Rational period_;
  std::vector<std::int64_t> s1_;
  std::vector<std::int64_t> s2_;
};

/// Zeroes the S2-tagged coefficients.
LatticeSpectrum project(const LatticeSpectrum& q);

/// (mean over a period of |q|^{2k})^{1/(2k)}, exact up to roundoff.
double lp_norm_exact_even(const LatticeSpectrum& q, unsigned k);
/// Sampled (mean |q|^p)^{1/p} for arbitrary p >= 1, `oversample` samples per
/// index of spread.
double lp_norm_sampled(const LatticeSpectrum& q, double p, std::size_t oversample = 32);

/// ||Pq||_p / ||q||_p together with its gradient with respect to the
/// coefficients (packed as complex numbers: d/dRe + i d/dIm of log ratio).
/// Exact for even integer p; sampled otherwise.
class RatioObjective {
 public:
  RatioObjective(const LatticeModel& model, double p);

  double log_ratio(std::span<const cplx> coeffs) const;
  double log_ratio(std::span<const cplx> coeffs, std::span<cplx> gradient) const;
  /// mean |q|^p for the full (unprojected) coefficients.
  double power_mean(std::span<const cplx> coeffs) const;
  double p() const { return p_; }
  bool exact() const { return exact_; }

 private:
  double power_mean(std::span<const cplx> coeffs, bool projected, std::span<cplx> gradient) const;

  const LatticeModel* model_;
  double p_;
  bool exact_;
  std::int64_t min_index_ = 0;
  std::size_t fft_len_ = 1;
};

struct TrialReport {
  double max_ratio = 0.0;
  std::size_t argmax_trial = 0;
  LatticeSpectrum argmax;
  std::size_t trials = 0;
};

/// Max over `trials` random spectra of ||Pq||_{2k} / ||q||_{2k}. Trials run
/// in parallel; trial i draws from stream i of `seed`.
TrialReport contraction_trial(const BoxUnion& s1, const BoxUnion& s2, unsigned k, const Rational& period,
                              std::size_t trials, std::uint64_t seed);
/// Same computation in a plain loop.
TrialReport contraction_trial_serial(const BoxUnion& s1, const BoxUnion& s2, unsigned k, const Rational& period,
                                     std::size_t trials, std::uint64_t seed);
/// General-p variant (sampled norms when p is not an even integer).
TrialReport contraction_trial_p(const LatticeModel& model, double p, std::size_t trials, std::uint64_t seed);

struct AscentOptions {
  unsigned iterations = 500;
  unsigned restarts = 8;
};

struct AscentResult {
  double ratio = 1.0;
  LatticeSpectrum spectrum;
  unsigned best_restart = 0;
  std::vector<double> best_so_far;  // per iteration, for the best restart
};

/// L-BFGS ascent on the log norm ratio, at most `iterations` steps per
/// restart. Restart 0 starts from the flat S1 spectrum, the others from
/// seeded random spectra.
AscentResult ratio_maximize(const BoxUnion& s1, const BoxUnion& s2, unsigned k, const Rational& period,
                            std::uint64_t seed, const AscentOptions& opts = {});
AscentResult ratio_maximize_p(const LatticeModel& model, double p, std::uint64_t seed, const AscentOptions& opts = {});

}  // namespace pwc::torus
