#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "pwc/errors.hpp"
#include "pwc/kernels.hpp"
#include "pwc/spectral.hpp"

using pwc::BoxUnion;
using pwc::Grid;
using pwc::Rational;
using pwc::cplx;

namespace {

BoxUnion iv(std::initializer_list<std::pair<Rational, Rational>> list) { return BoxUnion::intervals(list); }

const Grid kSmall = Grid::make(32.0, std::size_t{1} << 14);

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("grid") {
    const Grid g;
    CHECK(g.spacing() == std::ldexp(1.0, -10));
    CHECK(g.node(g.samples / 2) == 0.0);
    CHECK(g.node(g.samples / 2 + 1024) == 1.0);
    CHECK(g.dual().spacing() == 1.0 / 128.0);
    CHECK_THROWS(Grid::make(1.0, 1000));
    CHECK_THROWS(Grid::make(-1.0, 1024));
  }

  TEST_CASE("ft_indicator closed form") {
    CHECK(std::abs(pwc::ft_indicator(iv({{0, 1}}), 0.0) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(pwc::ft_indicator(iv({{-1, 1}}), 0.25) - cplx(4.0 / std::numbers::pi)) < 1e-14);
    for (double x : {0.3, -1.7, 1e-9, 12.25}) {
      const cplx a = pwc::ft_indicator(iv({{Rational(1, 3), Rational(5, 4)}}), x);
      const cplx b = pwc::ft_indicator(iv({{Rational(-4), Rational(-37, 12)}}), x);
      const double expected = std::abs(std::sin(std::numbers::pi * (11.0 / 12.0) * x) / (std::numbers::pi * x));
      CHECK(std::abs(a) == doctest::Approx(expected).epsilon(1e-12));
      CHECK(std::abs(b) == doctest::Approx(expected).epsilon(1e-12));
    }
    // Direct midpoint quadrature of the defining integral.
    const double x = 0.8;
    cplx direct = 0.0;
    const int n = 20000;
    for (int j = 0; j < n; ++j) {
      const double t = -0.5 + 2.5 * (j + 0.5) / n;
      direct += std::polar(2.5 / n, -2.0 * std::numbers::pi * x * t);
    }
    CHECK(std::abs(pwc::ft_indicator(iv({{Rational(-1, 2), 2}}), x) - direct) < 1e-8);
  }

  TEST_CASE("two-dimensional transform factorizes") {
    const BoxUnion sq(2, {pwc::Box({0, 0}, {1, 2})});
    const double pt[2] = {0.3, -0.2};
    const cplx v = pwc::ft_indicator(sq, std::span<const double>(pt, 2));
    CHECK(std::abs(v - pwc::ft_indicator(iv({{0, 1}}), 0.3) * pwc::ft_indicator(iv({{0, 2}}), -0.2)) < 1e-14);
  }

  TEST_CASE("lp_norm") {
    pwc::SampledFunction zero{kSmall, std::vector<cplx>(kSmall.samples), 0.0, 1.0, std::nullopt};
    const auto z = pwc::lp_norm(zero, 3.0);
    CHECK(z.value == cplx(0.0));
    CHECK(z.uncertainty() == 0.0);

    const auto f = pwc::sample_indicator_transform(iv({{-1, 1}}), Grid{});
    const auto n2 = pwc::lp_norm(f, 2.0);
    CHECK(std::abs(n2.value.real() - std::sqrt(2.0)) <= n2.uncertainty());

    const auto sinc = pwc::sample(Grid{}, [](double x) {
      return x == 0.0 ? cplx(1.0) : cplx(std::sin(2 * std::numbers::pi * x) / (2 * std::numbers::pi * x));
    });
    pwc::SampledFunction s = sinc;
    s.decay_constant = 1.0 / (2 * std::numbers::pi);
    s.bandwidth = 1.0;
    CHECK(pwc::lp_norm(s, std::numeric_limits<double>::infinity()).value.real() == 1.0);

    pwc::SampledFunction bare = f;
    bare.decay_constant.reset();
    CHECK_THROWS_AS(pwc::lp_norm(bare, 4.0), pwc::MissingDecayBound);
  }

  TEST_CASE("Plancherel on random unions") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 8; ++t) {
      std::vector<pwc::Box> boxes;
      const int n = std::uniform_int_distribution<int>(1, 3)(rng);
      for (int i = 0; i < n; ++i) {
        const long a = std::uniform_int_distribution<long>(-8, 8)(rng);
        boxes.push_back(pwc::Box::interval(Rational(a, 4), Rational(a + std::uniform_int_distribution<long>(1, 4)(rng), 4)));
      }
      const BoxUnion s(1, boxes);
      const auto q = pwc::lp_norm(pwc::sample_indicator_transform(s, Grid{}), 2.0);
      CHECK(std::abs(q.value.real() - std::sqrt(pwc::measure(s).to_double())) <= q.uncertainty());
    }
  }

  TEST_CASE("shapiro_pairing") {
    const auto f = pwc::sample_indicator_transform(iv({{0, 1}}), Grid{});
    const auto g = pwc::sample_indicator_transform(iv({{Rational(3, 2), Rational(5, 2)}}), Grid{});
    const auto p2 = pwc::shapiro_pairing(f, g, 2.0);
    CHECK(std::abs(p2.value) <= p2.uncertainty());
    const auto p4 = pwc::shapiro_pairing(f, g, 4.0);
    CHECK(p4.value.real() > p4.uncertainty());

    const auto fe = pwc::sample_indicator_transform(iv({{-1, 1}}), Grid{});
    const auto ge = pwc::sample_indicator_transform(iv({{-3, -2}, {2, 3}}), Grid{});
    const auto pe = pwc::shapiro_pairing(fe, ge, 3.0);
    CHECK(std::abs(pe.value.imag()) <= pe.uncertainty());

    const auto other = pwc::sample_indicator_transform(iv({{0, 1}}), kSmall);
    CHECK_THROWS_AS(pwc::shapiro_pairing(f, other, 4.0), pwc::GridMismatch);
  }

  TEST_CASE("phi_on_grid") {
    const Grid freq = Grid::make(8.0, std::size_t{1} << 14);
    const double h = freq.spacing();
    const auto phi1 = pwc::phi_on_grid(iv({{0, 1}}), 1, freq);
    for (std::size_t j = 0; j < freq.samples; ++j) {
      const double t = freq.node(j);
      if (t > h && t < 1 - h) CHECK(phi1.values[j].real() == doctest::Approx(1.0).epsilon(1e-12));
      if (t < -h || t > 1 + h) CHECK(std::abs(phi1.values[j]) < 1e-12);
    }
    const auto phi2 = pwc::phi_on_grid(iv({{0, 1}}), 2, freq);
    double mass = 0.0, peak = 0.0, peak_at = 0.0;
    for (std::size_t j = 0; j < freq.samples; ++j) {
      const double t = freq.node(j);
      const double v = phi2.values[j].real();
      mass += v * h;
      CHECK(v >= -1e-12);
      CHECK(std::abs(phi2.values[j].imag()) < 1e-12);
      if (t > -1 + 2 * h && t < 2 - 2 * h) CHECK(v > 0.0);
      if (t < -1 - 2 * h || t > 2 + 2 * h) CHECK(std::abs(v) < 1e-12);
      if (v > peak) {
        peak = v;
        peak_at = t;
      }
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(peak_at > 0.0);
    CHECK(peak_at < 1.0);
  }

  TEST_CASE("fourier_transform and support_scan") {
    const Grid g = Grid::make(16.0, std::size_t{1} << 13);
    const auto f = pwc::sample(g, [](double x) { return cplx(std::exp(-std::numbers::pi * x * x)); });
    const auto ft = pwc::fourier_transform(f);
    for (std::size_t j = 0; j < ft.grid.samples; j += 97) {
      const double t = ft.grid.node(j);
      CHECK(std::abs(ft.values[j] - std::exp(-std::numbers::pi * t * t)) < 1e-12);
    }
    pwc::SampledFunction zero{g, std::vector<cplx>(g.samples), 0.0, 1.0, std::nullopt};
    CHECK(pwc::support_scan(zero, 1e-12, -16, 16).empty());
    const auto bump = pwc::sample(g, [](double x) { return cplx(std::abs(x - 2) < 0.5 ? 1.0 : 0.0); });
    const auto runs = pwc::support_scan(bump, 0.5, 1.0, 3.0);
    REQUIRE(runs.size() == 1);
    CHECK(runs[0].first <= 2.0);
    CHECK(runs[0].second >= 2.0);
  }

  TEST_CASE("serial and OpenMP kernels agree") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> d;
    std::vector<cplx> f(50001), g(50001);
    for (auto& z : f) z = {d(rng), d(rng)};
    for (auto& z : g) z = {d(rng), d(rng)};
    namespace k = pwc::kernels;
    for (double p : {1.0, 2.5, 4.0}) {
      for (std::size_t stride : {1u, 2u}) {
        CHECK(k::omp::power_sum(f, p, stride) == doctest::Approx(k::serial::power_sum(f, p, stride)).epsilon(1e-12));
        const cplx a = k::omp::pairing_sum(f, g, p, stride), b = k::serial::pairing_sum(f, g, p, stride);
        CHECK(std::abs(a - b) <= 1e-11 * std::abs(b) + 1e-9);
        CHECK(k::omp::max_abs(f, stride) == k::serial::max_abs(f, stride));
        const double abs_sum = k::serial::pairing_abs_sum(f, g, p, stride);
        CHECK(k::omp::pairing_abs_sum(f, g, p, stride) == doctest::Approx(abs_sum).epsilon(1e-12));
        CHECK(abs_sum >= std::abs(b));
      }
    }
    std::vector<k::Interval> ivs = {{0.0, 1.0}, {1.5, 2.5}};
    std::vector<cplx> a(4096), b(4096);
    k::serial::sample_indicator_transform(ivs, -2.0, 1.0 / 1024, a);
    k::omp::sample_indicator_transform(ivs, -2.0, 1.0 / 1024, b);
    CHECK(a == b);
  }

  TEST_CASE("OpenMP reductions do not depend on the thread count") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> d;
    std::vector<cplx> f(100003);
    for (auto& z : f) z = {d(rng), d(rng)};
    pwc::kernels::set_threads(1);
    const double one = pwc::kernels::omp::power_sum(f, 3.0);
    pwc::kernels::set_threads(4);
    const double four = pwc::kernels::omp::power_sum(f, 3.0);
    CHECK(one == four);
  }

  TEST_CASE("linear_combination keeps a valid decay bound") {
    const auto f = pwc::sample_indicator_transform(iv({{0, 1}}), kSmall);
    auto g = pwc::sample_indicator_transform(iv({{2, 3}}), kSmall);
    g.decay_exponent = 2.0;
    g.decay_constant = 5.0;
    const auto c = pwc::linear_combination(1.0, f, -0.5, g);
    CHECK(c.decay_exponent == 1.0);
    CHECK(*c.decay_constant == doctest::Approx(1.0 / std::numbers::pi + 0.5 * 5.0 / 32.0));
    CHECK(std::abs(c.values[100] - (f.values[100] - 0.5 * g.values[100])) < 1e-15);
  }
}
