#include "pwc/torus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <ceres/ceres.h>

#include "pwc/errors.hpp"
#include "pwc/fft.hpp"

namespace pwc::torus {

namespace {

std::int64_t to_int64(const mpz_class& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("lattice index does not fit in 64 bits");
  return z.get_si();
}

void require_line(const BoxUnion& s, const Rational& period) {
  if (s.dim() != 1) throw PreconditionError("lattice model needs one-dimensional sets");
  if (period.sign() <= 0) throw std::invalid_argument("lattice period must be positive");
}

std::vector<std::int64_t> sorted_unique(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool is_even_integer(double p) { return p >= 2.0 && std::floor(p) == p && std::fmod(p, 2.0) == 0.0; }

std::size_t fft_length(std::int64_t spread, double p, bool exact, std::size_t oversample) {
  // Alias-free for |q|^p when p is even: the power has index spread p * spread.
  const auto alias_free = static_cast<std::size_t>(std::ceil(p * static_cast<double>(spread))) + 2;
  if (exact) return fft::next_pow2(alias_free);
  return fft::next_pow2(std::max(alias_free, oversample * static_cast<std::size_t>(spread + 1)));
}

// mean_j |q(x_j)|^p over n samples of the polynomial whose coefficient for
// index m sits at buf[m - min_index]. When `grad` is non-empty, grad[i]
// receives the coefficient of |q|^{p-2} q at offsets[i].
double sampled_power_mean(std::vector<cplx>& buf, double p, std::span<const std::size_t> offsets, std::span<cplx> grad) {
  const std::size_t n = buf.size();
  fft::transform(buf, fft::Direction::Backward);
  double sum = 0.0;
  for (const cplx& z : buf) sum += std::pow(std::norm(z), 0.5 * p);
  if (!grad.empty()) {
    for (cplx& z : buf) {
      const double n2 = std::norm(z);
      z = n2 == 0.0 ? cplx(0.0) : std::pow(n2, 0.5 * (p - 2.0)) * z;
    }
    fft::transform(buf, fft::Direction::Forward);
    for (std::size_t i = 0; i < offsets.size(); ++i) grad[i] = buf[offsets[i]] / static_cast<double>(n);
  }
  return sum / static_cast<double>(n);
}

double spectrum_power_mean(const LatticeSpectrum& q, double p, bool exact, std::size_t oversample) {
  if (q.modes.empty()) return 0.0;
  std::int64_t lo = q.modes.front().index, hi = lo;
  for (const auto& m : q.modes) {
    lo = std::min(lo, m.index);
    hi = std::max(hi, m.index);
  }
  std::vector<cplx> buf(fft_length(hi - lo, p, exact, oversample), 0.0);
  for (const auto& m : q.modes) buf[static_cast<std::size_t>(m.index - lo)] += m.amplitude;
  return sampled_power_mean(buf, p, {}, {});
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

void normalize_power_mean(const RatioObjective& obj, std::vector<cplx>& c) {
  const double b = obj.power_mean(c);
  if (!(b > 0.0)) return;
  const double s = std::pow(b, -1.0 / obj.p());
  for (auto& z : c) z *= s;
}

// -log ratio over the real and imaginary parts of the coefficients.
class NegativeLogRatio final : public ceres::FirstOrderFunction {
 public:
  NegativeLogRatio(const RatioObjective& obj, std::size_t n) : obj_(obj), c_(n), g_(n) {}

  bool Evaluate(const double* x, double* cost, double* gradient) const override {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = {x[2 * i], x[2 * i + 1]};
    const double v = gradient ? obj_.log_ratio(c_, g_) : obj_.log_ratio(c_);
    if (!std::isfinite(v)) return false;
    *cost = -v;
    if (gradient) {
      for (std::size_t i = 0; i < g_.size(); ++i) {
        gradient[2 * i] = -g_[i].real();
        gradient[2 * i + 1] = -g_[i].imag();
      }
    }
    return true;
  }
  int NumParameters() const override { return static_cast<int>(2 * c_.size()); }

 private:
  const RatioObjective& obj_;
  mutable std::vector<cplx> c_;
  mutable std::vector<cplx> g_;
};

}  // namespace

std::vector<std::int64_t> lattice_points(const BoxUnion& s, const Rational& period) {
  require_line(s, period);
  std::vector<std::int64_t> out;
  for (const Box& b : s.boxes()) {
    const auto first = to_int64((b.lo[0] * period).ceil());
    const auto last = to_int64((b.hi[0] * period).floor());
    for (std::int64_t m = first; m <= last; ++m) out.push_back(m);
  }
  return sorted_unique(std::move(out));
}

std::vector<std::int64_t> interior_lattice_points(const BoxUnion& s, const Rational& period) {
  require_line(s, period);
  std::vector<std::int64_t> out;
  for (const Box& b : s.boxes()) {
    if (b.degenerate()) continue;
    const auto first = to_int64((b.lo[0] * period).floor()) + 1;
    const auto last = to_int64((b.hi[0] * period).ceil()) - 1;
    for (std::int64_t m = first; m <= last; ++m) out.push_back(m);
  }
  return sorted_unique(std::move(out));
}

LatticeModel::LatticeModel(const BoxUnion& s1, const BoxUnion& s2, Rational period)
    : period_(std::move(period)), s1_(lattice_points(s1, period_)) {
  for (std::int64_t m : interior_lattice_points(s2, period_)) {
    if (!std::binary_search(s1_.begin(), s1_.end(), m)) s2_.push_back(m);
  }
}

LatticeSpectrum LatticeModel::spectrum(std::span<const cplx> coeffs) const {
  if (coeffs.size() != size()) throw std::invalid_argument("LatticeModel::spectrum: wrong coefficient count");
  LatticeSpectrum q;
  q.period = period_;
  q.modes.reserve(size());
  for (std::size_t i = 0; i < s1_.size(); ++i) q.modes.push_back({s1_[i], Band::S1, coeffs[i]});
  for (std::size_t i = 0; i < s2_.size(); ++i) q.modes.push_back({s2_[i], Band::S2, coeffs[s1_.size() + i]});
  std::sort(q.modes.begin(), q.modes.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
  return q;
}

std::vector<cplx> LatticeModel::random_coefficients(std::uint64_t seed, std::uint64_t stream) const {
  auto rng = stream_rng(seed, stream);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::vector<cplx> c(size());
  for (auto& z : c) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = {re, im};
  }
  return c;
}

LatticeSpectrum project(const LatticeSpectrum& q) {
  LatticeSpectrum out = q;
  for (auto& m : out.modes) {
    if (m.band == Band::S2) m.amplitude = 0.0;
  }
  return out;
}

double lp_norm_exact_even(const LatticeSpectrum& q, unsigned k) {
  if (k == 0) throw std::invalid_argument("lp_norm_exact_even: k must be positive");
  const double p = 2.0 * k;
  return std::pow(spectrum_power_mean(q, p, true, 1), 1.0 / p);
}

double lp_norm_sampled(const LatticeSpectrum& q, double p, std::size_t oversample) {
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("lp_norm_sampled: p must be finite and >= 1");
  return std::pow(spectrum_power_mean(q, p, is_even_integer(p), oversample), 1.0 / p);
}

RatioObjective::RatioObjective(const LatticeModel& model, double p) : model_(&model), p_(p), exact_(is_even_integer(p)) {
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("RatioObjective: p must be finite and >= 1");
  if (model.size() == 0) throw PreconditionError("RatioObjective: empty lattice");
  std::int64_t lo = std::numeric_limits<std::int64_t>::max(), hi = std::numeric_limits<std::int64_t>::min();
  for (const auto* v : {&model.s1_indices(), &model.s2_indices()}) {
    for (std::int64_t m : *v) {
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
  }
  min_index_ = lo;
  fft_len_ = fft_length(hi - lo, p, exact_, 32);
}

double RatioObjective::power_mean(std::span<const cplx> coeffs, bool projected, std::span<cplx> gradient) const {
  const auto& s1 = model_->s1_indices();
  const auto& s2 = model_->s2_indices();
  std::vector<cplx> buf(fft_len_, 0.0);
  std::vector<std::size_t> offsets;
  offsets.reserve(s1.size() + s2.size());
  for (std::int64_t m : s1) offsets.push_back(static_cast<std::size_t>(m - min_index_));
  for (std::int64_t m : s2) offsets.push_back(static_cast<std::size_t>(m - min_index_));
  const std::size_t used = projected ? s1.size() : offsets.size();
  for (std::size_t i = 0; i < used; ++i) buf[offsets[i]] = coeffs[i];
  double mean;
  if (gradient.empty()) {
    mean = sampled_power_mean(buf, p_, {}, {});
  } else {
    std::fill(gradient.begin(), gradient.end(), cplx(0.0));
    mean = sampled_power_mean(buf, p_, std::span<const std::size_t>(offsets).first(used), gradient.first(used));
  }
  return mean;
}

double RatioObjective::power_mean(std::span<const cplx> coeffs) const { return power_mean(coeffs, false, {}); }

double RatioObjective::log_ratio(std::span<const cplx> coeffs) const {
  const double a = power_mean(coeffs, true, {});
  const double b = power_mean(coeffs, false, {});
  if (!(a > 0.0)) return -std::numeric_limits<double>::infinity();
  return (std::log(a) - std::log(b)) / p_;
}

double RatioObjective::log_ratio(std::span<const cplx> coeffs, std::span<cplx> gradient) const {
  if (gradient.size() != coeffs.size()) throw std::invalid_argument("RatioObjective: gradient size mismatch");
  std::vector<cplx> ga(coeffs.size()), gb(coeffs.size());
  const double a = power_mean(coeffs, true, ga);
  const double b = power_mean(coeffs, false, gb);
  if (!(a > 0.0)) {
    std::fill(gradient.begin(), gradient.end(), cplx(0.0));
    return -std::numeric_limits<double>::infinity();
  }
  // d/dc of mean|q|^p is p * coef(|q|^{p-2} q); the factor p cancels in
  // (log A - log B) / p.
  for (std::size_t i = 0; i < coeffs.size(); ++i) gradient[i] = ga[i] / a - gb[i] / b;
  return (std::log(a) - std::log(b)) / p_;
}

TrialReport contraction_trial_p(const LatticeModel& model, double p, std::size_t trials, std::uint64_t seed) {
  if (model.s1_indices().empty()) throw PreconditionError("contraction_trial: S1 contains no lattice points");
  const RatioObjective obj(model, p);
  std::vector<double> ratios(trials);
  const auto n = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    const auto c = model.random_coefficients(seed, static_cast<std::uint64_t>(t));
    ratios[static_cast<std::size_t>(t)] = std::exp(obj.log_ratio(c));
  }
  TrialReport r;
  r.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    if (ratios[t] > r.max_ratio) {
      r.max_ratio = ratios[t];
      r.argmax_trial = t;
    }
  }
  if (trials > 0) r.argmax = model.spectrum(model.random_coefficients(seed, r.argmax_trial));
  return r;
}

TrialReport contraction_trial(const BoxUnion& s1, const BoxUnion& s2, unsigned k, const Rational& period,
                              std::size_t trials, std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("contraction_trial: k must be positive");
  const LatticeModel model(s1, s2, period);
  return contraction_trial_p(model, 2.0 * k, trials, seed);
}

TrialReport contraction_trial_serial(const BoxUnion& s1, const BoxUnion& s2, unsigned k, const Rational& period,
                                     std::size_t trials, std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("contraction_trial: k must be positive");
  const LatticeModel model(s1, s2, period);
  if (model.s1_indices().empty()) throw PreconditionError("contraction_trial: S1 contains no lattice points");
  const RatioObjective obj(model, 2.0 * k);
  TrialReport r;
  r.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto c = model.random_coefficients(seed, t);
    const double ratio = std::exp(obj.log_ratio(c));
    if (ratio > r.max_ratio) {
      r.max_ratio = ratio;
      r.argmax_trial = t;
      r.argmax = model.spectrum(c);
    }
  }
  return r;
}

AscentResult ratio_maximize_p(const LatticeModel& model, double p, std::uint64_t seed, const AscentOptions& opts) {
  if (model.s1_indices().empty() || model.s2_indices().empty()) {
    throw PreconditionError("ratio_maximize: both S1 and S2 need lattice points");
  }
  if (opts.restarts == 0) throw std::invalid_argument("ratio_maximize: at least one restart required");
  const RatioObjective obj(model, p);
  struct RestartResult {
    double log_ratio = -std::numeric_limits<double>::infinity();
    std::vector<cplx> coeffs;
    std::vector<double> trace;
  };
  std::vector<RestartResult> results(opts.restarts);
  const auto n = static_cast<std::ptrdiff_t>(opts.restarts);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    std::vector<cplx> c;
    if (r == 0) {
      c.assign(model.size(), cplx(0.0));
      std::fill(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(model.s1_indices().size()), cplx(1.0));
    } else {
      c = model.random_coefficients(seed, 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(r));
    }
    normalize_power_mean(obj, c);
    RestartResult& out = results[static_cast<std::size_t>(r)];
    std::vector<double> x(2 * c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      x[2 * i] = c[i].real();
      x[2 * i + 1] = c[i].imag();
    }
    ceres::GradientProblem problem(new NegativeLogRatio(obj, c.size()));
    ceres::GradientProblemSolver::Options solver;
    solver.line_search_direction_type = ceres::LBFGS;
    solver.max_num_iterations = static_cast<int>(opts.iterations);
    solver.function_tolerance = 1e-15;
    solver.gradient_tolerance = 1e-13;
    solver.parameter_tolerance = 1e-15;
    solver.logging_type = ceres::SILENT;
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(solver, problem, x.data(), &summary);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& step : summary.iterations) {
      best = std::max(best, -step.cost);
      out.trace.push_back(std::exp(best));
    }
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = {x[2 * i], x[2 * i + 1]};
    normalize_power_mean(obj, c);
    const double current = obj.log_ratio(c);
    out.log_ratio = current;
    out.coeffs = std::move(c);
  }
  AscentResult best;
  best.ratio = -1.0;
  for (unsigned r = 0; r < opts.restarts; ++r) {
    const double ratio = std::exp(results[r].log_ratio);
    if (ratio > best.ratio) {
      best.ratio = ratio;
      best.best_restart = r;
    }
  }
  best.spectrum = model.spectrum(results[best.best_restart].coeffs);
  best.best_so_far = std::move(results[best.best_restart].trace);
  return best;
}

AscentResult ratio_maximize(const BoxUnion& s1, const BoxUnion& s2, unsigned k, const Rational& period,
                            std::uint64_t seed, const AscentOptions& opts) {
  if (k == 0) throw std::invalid_argument("ratio_maximize: k must be positive");
  const LatticeModel model(s1, s2, period);
  return ratio_maximize_p(model, 2.0 * k, seed, opts);
}

}  // namespace pwc::torus
