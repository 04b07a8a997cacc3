#include "pwc/witness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pwc/errors.hpp"
#include "pwc/truncated_power.hpp"

namespace pwc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxHalvings = 40;
// Any N >= 2 gives sign(h) = 2χ_{[-1,1]} - 1; N = 4 makes the L^1 tail
// beyond the default grid negligible.
constexpr unsigned kPOneN = 4;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double sinc_pi(double y) {
  if (std::abs(y) < 1e-8) return 1.0 - (kPi * y) * (kPi * y) / 6.0;
  return std::sin(kPi * y) / (kPi * y);
}

// Inverse transform of cos²(πt/(2δ)) on [-δ, δ].
double raised_cosine_transform(double delta, double x) {
  const double y = 2.0 * delta * x;
  const double denom = 1.0 - y * y;
  if (std::abs(denom) < 1e-9) return 0.5 * delta;
  return delta * sinc_pi(y) / denom;
}

double raised_cosine(double delta, double t) {
  if (std::abs(t) >= delta) return 0.0;
  const double c = std::cos(kPi * t / (2.0 * delta));
  return c * c;
}

std::size_t positive_box_count(const BoxUnion& s) {
  const BoxUnion n = normalize(s);
  return static_cast<std::size_t>(std::count_if(n.boxes().begin(), n.boxes().end(), [](const Box& b) { return !b.degenerate(); }));
}

bool is_even_integer(double p) { return p >= 2.0 && std::floor(p) == p && std::fmod(p, 2.0) == 0.0; }

// Simpson's rule on [lo, hi] with 2m panels.
template <class Fn>
double simpson(Fn&& fn, double lo, double hi, std::size_t m) {
  const std::size_t n = 2 * m;
  const double h = (hi - lo) / static_cast<double>(n);
  double s = fn(lo) + fn(hi);
  for (std::size_t i = 1; i < n; ++i) s += fn(lo + static_cast<double>(i) * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

bool strictly_below(const QuadratureResult& after, const QuadratureResult& before) {
  return after.value.real() + after.uncertainty() < before.value.real() - before.uncertainty();
}

// Tries ε = sign 2^{-j} for j = first..kMaxHalvings and returns the first
// certified one.
bool scan_epsilon(Witness& w, const SampledFunction& f, const SampledFunction& g, double p, double sign, int first) {
  for (int j = first; j <= kMaxHalvings; ++j) {
    const double eps = sign * std::ldexp(1.0, -j);
    const SampledFunction sum = linear_combination(1.0, f, eps, g);
    const QuadratureResult after = lp_norm(sum, p);
    if (strictly_below(after, w.norm_before)) {
      w.epsilon = eps;
      w.norm_after = after;
      return true;
    }
  }
  return false;
}

}  // namespace

std::string to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::EvenP: return "EvenP";
    case WitnessKind::OddP: return "OddP";
    case WitnessKind::POne: return "POne";
    case WitnessKind::PInf: return "PInf";
  }
  return "?";
}

cplx FunctionRecipe::evaluate(double x) const {
  return std::visit(
      overloaded{
          [x](const recipe::IndicatorTransform& r) { return ft_indicator(r.set, x); },
          [x](const recipe::DilatedH& r) { return cplx(h_function(r.n, r.scale * x)); },
          [x](const recipe::ModulatedBump& r) {
            return std::polar(raised_cosine_transform(r.half_width, x), r.phase + 2.0 * kPi * r.center * x);
          },
          [x](const recipe::ModulatedSinc& r) {
            return std::polar(sinc_pi(2.0 * r.radius * x), 2.0 * kPi * r.center * x);
          },
      },
      form);
}

std::pair<double, double> FunctionRecipe::decay(double t0) const {
  if (!(t0 > 0.0)) throw std::invalid_argument("FunctionRecipe::decay: t0 must be positive");
  return std::visit(
      overloaded{
          [](const recipe::IndicatorTransform& r) {
            return std::pair{static_cast<double>(positive_box_count(r.set)) / kPi, 1.0};
          },
          [t0](const recipe::DilatedH& r) {
            // For |y| > N: |h(y)| <= (1 + cosh 2π)(y² + 1) / ∏ (|y| - k)², and
            // |y|^{2N-2} times the right side decreases in |y|.
            const double y0 = r.scale * t0;
            if (!(y0 > static_cast<double>(r.n))) throw std::invalid_argument("DilatedH: grid too short for the decay bound");
            const double alpha = 2.0 * r.n - 2.0;
            double c = (1.0 + std::cosh(2.0 * kPi)) * (y0 * y0 + 1.0) * std::pow(y0, alpha);
            for (unsigned k = 1; k <= r.n; ++k) c /= (y0 - k) * (y0 - k);
            return std::pair{c / std::pow(r.scale, alpha), alpha};
          },
          [t0](const recipe::ModulatedBump& r) {
            const double q = 4.0 * r.half_width * r.half_width - 1.0 / (t0 * t0);
            if (!(q > 0.0)) throw std::invalid_argument("ModulatedBump: grid too short for the decay bound");
            return std::pair{1.0 / (2.0 * kPi * q), 3.0};
          },
          [](const recipe::ModulatedSinc& r) { return std::pair{1.0 / (2.0 * kPi * r.radius), 1.0}; },
      },
      form);
}

double FunctionRecipe::bandwidth() const {
  return std::visit(overloaded{
                        [](const recipe::IndicatorTransform& r) {
                          double b = 0.0;
                          for (const Box& box : r.set.boxes()) {
                            b = std::max({b, std::abs(box.lo[0].to_double()), std::abs(box.hi[0].to_double())});
                          }
                          return b;
                        },
                        [](const recipe::DilatedH& r) { return std::abs(r.scale); },
                        [](const recipe::ModulatedBump& r) { return std::abs(r.center) + r.half_width; },
                        [](const recipe::ModulatedSinc& r) { return std::abs(r.center) + r.radius; },
                    },
                    form);
}

std::string FunctionRecipe::name() const {
  return std::visit(overloaded{
                        [](const recipe::IndicatorTransform&) { return std::string("indicator_transform"); },
                        [](const recipe::DilatedH&) { return std::string("dilated_h"); },
                        [](const recipe::ModulatedBump&) { return std::string("modulated_bump"); },
                        [](const recipe::ModulatedSinc&) { return std::string("modulated_sinc"); },
                    },
                    form);
}

bool Witness::certified() const { return epsilon != 0.0 && strictly_below(norm_after, norm_before); }

SampledFunction sample_recipe(const FunctionRecipe& r, const Grid& grid) {
  SampledFunction f;
  if (const auto* ind = std::get_if<recipe::IndicatorTransform>(&r.form)) {
    f = sample_indicator_transform(ind->set, grid);
  } else {
    f = sample(grid, [&r](double x) { return r.evaluate(x); });
  }
  const auto [c, alpha] = r.decay(grid.half_width);
  f.decay_constant = c;
  f.decay_exponent = alpha;
  f.bandwidth = r.bandwidth();
  return f;
}

Witness even_witness(const BoxUnion& s1, const BoxUnion& s2, unsigned k, const Grid& grid) {
  if (s1.dim() != 1 || s2.dim() != 1) throw PreconditionError("even_witness: one-dimensional sets required");
  if (k == 0) throw std::invalid_argument("even_witness: k must be positive");
  if (decide(s1, s2, ExponentSpec::even(k)).verdict != Verdict::NotContractive) {
    throw PreconditionError("even_witness: the projection is contractive for p = " + std::to_string(2 * k));
  }
  const double p = 2.0 * k;
  Witness w;
  w.kind = WitnessKind::EvenP;
  w.grid = grid;
  w.f.form = recipe::IndicatorTransform{s1};
  w.g.form = recipe::IndicatorTransform{s2};
  const SampledFunction f = sample_recipe(w.f, grid);
  const SampledFunction g = sample_recipe(w.g, grid);
  w.pairing = shapiro_pairing(f, g, p);
  w.predicted_pairing = indicator_autoconvolution(s1, k).integral_over(s2).to_double();
  const double c = w.pairing->value.real();
  if (!(std::abs(c) > w.pairing->uncertainty())) {
    throw CertificationFailure("even_witness: pairing " + std::to_string(c) + " is within its uncertainty " +
                               std::to_string(w.pairing->uncertainty()) + "; refine the grid");
  }
  w.norm_before = lp_norm(f, p);
  if (!scan_epsilon(w, f, g, p, c > 0 ? -1.0 : 1.0, 1)) {
    throw CertificationFailure("even_witness: no ε = ±2^-j certified the norm decrease; refine the grid");
  }
  return w;
}

double h_function(unsigned n, double x) {
  double d = 1.0;
  for (unsigned k = 1; k <= n; ++k) d *= (x + k) * (x + k) + 1.0;
  return (x * x - 1.0) * (std::cos(2.0 * kPi * x) - std::cosh(2.0 * kPi)) / d;
}

unsigned n_threshold(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("n_threshold: p must exceed 1");
  // Smallest integer strictly above t. A t within roundoff of an integer is
  // taken to be that integer, so p = 1.1 gives t = 7 and N = 8.
  const double t = 1.0 / (2.0 * (p - 1.0)) + 2.0;
  const double r = std::round(t);
  const double base = std::abs(t - r) <= 1e-9 * t ? r : std::floor(t);
  return static_cast<unsigned>(base) + 1;
}

double h_function(double p, double x) { return h_function(n_threshold(p), x); }

double h_power_integral(double p, double half_width, std::size_t samples) {
  const Grid grid = Grid::make(half_width, samples);
  const unsigned n = n_threshold(p);
  double sum = 0.0;
  const auto m = static_cast<std::ptrdiff_t>(samples);
#pragma omp parallel for reduction(+ : sum) schedule(static)
  for (std::ptrdiff_t j = 0; j < m; ++j) sum += std::pow(std::abs(h_function(n, grid.node(static_cast<std::size_t>(j)))), p - 1.0);
  return sum * grid.spacing();
}

Witness odd_witness(double p, std::pair<Rational, Rational> i, std::pair<Rational, Rational> j, const Grid& grid) {
  if (!(p >= 1.0) || std::isinf(p) || is_even_integer(p)) {
    throw PreconditionError("odd_witness: p must be finite, >= 1 and not an even integer");
  }
  if (!(i.first < i.second) || !(j.first < j.second)) throw PreconditionError("odd_witness: intervals must be nondegenerate");
  if (i.second > j.first && j.second > i.first) throw PreconditionError("odd_witness: intervals overlap");

  // Move I to [-1, 1]; reflect when J lies to the left.
  const Rational center = (i.first + i.second) / Rational(2);
  const Rational radius = (i.second - i.first) / Rational(2);
  double a = ((j.first - center) / radius).to_double();
  double b = ((j.second - center) / radius).to_double();
  Witness w;
  w.grid = grid;
  w.frame = {center.to_double(), radius.to_double()};
  if (b <= -1.0) {
    std::tie(a, b) = std::pair{-b, -a};
    w.frame.radius = -w.frame.radius;
  }

  const double delta = std::min((b - a) / 4.0, 0.125);
  double xi = 0.5 * (a + b);

  if (p == 1.0) {
    // sign(h) = 2χ_{[-1,1]} - 1, whose transform is 2 sin(2πξ)/(πξ) - δ_0.
    // Put the bump where sin(2πξ) = ±1 when J allows it.
    const double first = std::ceil((a + delta - 0.25) * 2.0) / 2.0 + 0.25;
    if (first <= b - delta) xi = first;
    w.kind = WitnessKind::POne;
    w.f.form = recipe::DilatedH{kPOneN, 1.0};
    w.g.form = recipe::ModulatedBump{xi, delta, 0.0};
    const auto integrand = [xi, delta](double t) { return 2.0 * std::sin(2.0 * kPi * t) / (kPi * t) * raised_cosine(delta, t - xi); };
    const double fine = simpson(integrand, xi - delta, xi + delta, 4096);
    const double coarse = simpson(integrand, xi - delta, xi + delta, 2048);
    QuadratureResult pr;
    pr.value = fine - raised_cosine(delta, -xi);
    pr.discretization_estimate = std::abs(fine - coarse);
    pr.rounding_bound = 1e-15 * std::abs(fine);
    w.pairing = pr;
  } else {
    const unsigned n = n_threshold(p);
    SampledFunction u = sample(grid, [n, p](double y) {
      const double v = h_function(n, y);
      return cplx(v == 0.0 ? 0.0 : std::pow(std::abs(v), p - 2.0) * v);
    });
    const SampledFunction big_g = fourier_transform(u);
    const double half = big_g.grid.half_width;
    double noise = 0.0;
    for (std::size_t k = 0; k < big_g.values.size(); ++k) {
      if (std::abs(big_g.grid.node(k)) >= 0.875 * half) noise = std::max(noise, std::abs(big_g.values[k]));
    }
    const double threshold = std::max(10.0 * noise, std::numeric_limits<double>::min());
    const double window_hi = 0.75 * half;
    const auto runs = support_scan(big_g, threshold, xi, window_hi);
    if (runs.empty()) {
      throw InconclusiveSupport("odd_witness: no support point of the transform of |h|^{p-2}h above " +
                                    std::to_string(threshold) + " in the scanned window",
                                xi, window_hi);
    }
    const double x0 = runs.front().first;
    const double dual_h = big_g.grid.spacing();
    const auto node = static_cast<std::size_t>(std::llround((x0 + half) / dual_h));
    w.kind = WitnessKind::OddP;
    w.support_point = x0;
    w.f.form = recipe::DilatedH{n, xi / x0};
    w.g.form = recipe::ModulatedBump{xi, delta, std::arg(big_g.values[node])};
  }

  const SampledFunction f = sample_recipe(w.f, grid);
  const SampledFunction g = sample_recipe(w.g, grid);
  if (w.kind == WitnessKind::OddP) w.pairing = shapiro_pairing(f, g, p);
  const double c = w.pairing->value.real();
  if (!(std::abs(c) > w.pairing->uncertainty())) {
    throw CertificationFailure("odd_witness: pairing " + std::to_string(c) + " is within its uncertainty " +
                               std::to_string(w.pairing->uncertainty()) + "; refine the grid");
  }
  w.norm_before = lp_norm(f, p);
  if (!scan_epsilon(w, f, g, p, c > 0 ? -1.0 : 1.0, 1)) {
    throw CertificationFailure("odd_witness: no ε = ±2^-j certified the norm decrease; refine the grid");
  }
  return w;
}

Witness inf_witness(const BoxUnion& s1, const BoxUnion& s2, const Grid& grid) {
  if (s1.dim() != 1 || s2.dim() != 1) throw PreconditionError("inf_witness: one-dimensional sets required");
  check_hypotheses(s1, s2);
  if (measure(s1).sign() == 0 || measure(s2).sign() == 0) {
    throw PreconditionError("inf_witness: both sets need positive measure");
  }
  const Box big = *largest_box(s1);
  Witness w;
  w.kind = WitnessKind::PInf;
  w.grid = grid;
  w.f.form = recipe::ModulatedSinc{((big.lo[0] + big.hi[0]) / Rational(2)).to_double(),
                                   ((big.hi[0] - big.lo[0]) / Rational(2)).to_double()};
  w.g.form = recipe::IndicatorTransform{s2};
  const SampledFunction f = sample_recipe(w.f, grid);
  const SampledFunction g = sample_recipe(w.g, grid);
  // |f| <= 1 with equality at x = 0, so the sup is exactly 1.
  w.norm_before.value = 1.0;
  // g(0) = mes(S2) > 0, so subtracting εg lowers the peak.
  if (!scan_epsilon(w, f, g, std::numeric_limits<double>::infinity(), -1.0, 4)) {
    throw CertificationFailure("inf_witness: no ε = 2^-j certified sup |f - εg| < 1; refine the grid or extend T");
  }
  return w;
}

Witness make_witness(const BoxUnion& s1, const BoxUnion& s2, const ExponentSpec& p, const Grid& grid) {
  if (s1.dim() != 1 || s2.dim() != 1) throw PreconditionError("witness constructions need one-dimensional sets");
  const Certificate cert = decide(s1, s2, p);
  if (cert.verdict == Verdict::Contractive) {
    throw PreconditionError("contractive: no witness exists for p = " + p.to_string());
  }
  if (p.is_even()) return even_witness(s1, s2, p.half(), grid);
  if (p.is_infinite()) return inf_witness(s1, s2, grid);
  const Box bi = *largest_box(s1);
  const Box bj = *largest_box(s2);
  return odd_witness(p.to_double(), {bi.lo[0], bi.hi[0]}, {bj.lo[0], bj.hi[0]}, grid);
}

}  // namespace pwc
