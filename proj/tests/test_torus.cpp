#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pwc/errors.hpp"
#include "pwc/torus.hpp"

using pwc::BoxUnion;
using pwc::Rational;
using pwc::torus::Band;
using pwc::torus::LatticeSpectrum;
using cplx = std::complex<double>;

namespace {

BoxUnion iv(std::initializer_list<std::pair<Rational, Rational>> list) { return BoxUnion::intervals(list); }

const BoxUnion kUnit = iv({{0, 1}});
const BoxUnion kNear = iv({{Rational(3, 2), Rational(5, 2)}});
const BoxUnion kFar = iv({{4, 5}});

std::vector<std::pair<long, cplx>> modes_of(const LatticeSpectrum& q) {
  std::vector<std::pair<long, cplx>> out;
  for (const auto& m : q.modes) out.emplace_back(static_cast<long>(m.index), m.amplitude);
  return out;
}

}  // namespace

TEST_SUITE("torus") {
  TEST_CASE("lattice_points") {
    CHECK(pwc::torus::lattice_points(kUnit, Rational(4)) == std::vector<std::int64_t>{0, 1, 2, 3, 4});
    CHECK(pwc::torus::lattice_points(kNear, Rational(2)) == std::vector<std::int64_t>{3, 4, 5});
    CHECK(pwc::torus::lattice_points(iv({{0, 1}, {2, 3}}), Rational(1)) == std::vector<std::int64_t>{0, 1, 2, 3});
    CHECK(pwc::torus::interior_lattice_points(kUnit, Rational(4)) == std::vector<std::int64_t>{1, 2, 3});
    CHECK(pwc::torus::lattice_points(iv({{Rational(-1, 3), Rational(1, 3)}}), Rational(3, 2)).size() == 1);
    CHECK_THROWS(pwc::torus::lattice_points(BoxUnion(2, {pwc::Box({0, 0}, {1, 1})}), Rational(2)));
  }

  TEST_CASE("model tags S2 by interior points not already in S1") {
    const pwc::torus::LatticeModel m(kUnit, iv({{1, 2}}), Rational(2));
    CHECK(m.s1_indices() == std::vector<std::int64_t>{0, 1, 2});
    CHECK(m.s2_indices() == std::vector<std::int64_t>{3});
  }

  TEST_CASE("project") {
    const pwc::torus::LatticeModel m(kUnit, kNear, Rational(4));
    const auto c = m.random_coefficients(1, 0);
    const LatticeSpectrum q = m.spectrum(c);
    const LatticeSpectrum pq = pwc::torus::project(q);
    for (std::size_t i = 0; i < q.modes.size(); ++i) {
      if (q.modes[i].band == Band::S1) CHECK(pq.modes[i].amplitude == q.modes[i].amplitude);
      else CHECK(pq.modes[i].amplitude == cplx(0.0));
    }
    const LatticeSpectrum ppq = pwc::torus::project(pq);
    for (std::size_t i = 0; i < q.modes.size(); ++i) CHECK(ppq.modes[i].amplitude == pq.modes[i].amplitude);

    LatticeSpectrum all_s2{Rational(4), {{7, Band::S2, 2.0}, {8, Band::S2, 1.0}}};
    for (const auto& mode : pwc::torus::project(all_s2).modes) CHECK(mode.amplitude == cplx(0.0));
  }

  TEST_CASE("exact even norms") {
    LatticeSpectrum single{Rational(3), {{5, Band::S1, cplx(0.6, -0.8) * 3.0}}};
    for (unsigned k = 1; k <= 5; ++k) CHECK(pwc::torus::lp_norm_exact_even(single, k) == doctest::Approx(3.0).epsilon(1e-14));

    LatticeSpectrum two{Rational(1), {{0, Band::S1, 1.0}, {1, Band::S1, 1.0}}};
    CHECK(pwc::torus::lp_norm_exact_even(two, 2) == doctest::Approx(std::pow(6.0, 0.25)).epsilon(1e-14));

    LatticeSpectrum shifted = two;
    for (auto& m : shifted.modes) m.index += 17;
    CHECK(pwc::torus::lp_norm_exact_even(shifted, 3) == doctest::Approx(pwc::torus::lp_norm_exact_even(two, 3)).epsilon(1e-13));
  }

  TEST_CASE("exact norms match brute-force trigonometric sums") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> d;
    for (int t = 0; t < 10; ++t) {
      LatticeSpectrum q{Rational(1), {}};
      const int n = std::uniform_int_distribution<int>(1, 6)(rng);
      for (int i = 0; i < n; ++i) q.modes.push_back({static_cast<std::int64_t>(i * 2 - 3), Band::S1, {d(rng), d(rng)}});
      for (unsigned k = 1; k <= 4; ++k) {
        const double exact = std::pow(pwc::torus::lp_norm_exact_even(q, k), 2.0 * k);
        const double direct = oracle::direct_power_mean(modes_of(q), 2.0 * k, 997);
        CHECK(exact == doctest::Approx(direct).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("p = 2 projection never increases the norm") {
    const pwc::torus::LatticeModel m(kUnit, kNear, Rational(8));
    for (std::uint64_t s = 0; s < 50; ++s) {
      const LatticeSpectrum q = m.spectrum(m.random_coefficients(9, s));
      CHECK(pwc::torus::lp_norm_exact_even(pwc::torus::project(q), 1) <= pwc::torus::lp_norm_exact_even(q, 1));
    }
  }

  TEST_CASE("contraction_trial") {
    const auto r = pwc::torus::contraction_trial(kUnit, kFar, 2, Rational(8), 500, 3);
    CHECK(r.trials == 500);
    CHECK(r.max_ratio <= 1.0 + 1e-12);

    const auto thin = pwc::torus::contraction_trial(kUnit, iv({{4, Rational(65, 16)}}), 3, Rational(8), 50, 3);
    CHECK(thin.max_ratio == 1.0);

    CHECK_THROWS_AS(pwc::torus::contraction_trial(iv({{Rational(1, 10), Rational(1, 5)}}), kFar, 2, Rational(1), 5, 0),
                    pwc::PreconditionError);
  }

  TEST_CASE("trials: serial reference, thread count and seed determinism") {
    const auto a = pwc::torus::contraction_trial(kUnit, kNear, 2, Rational(8), 300, 42);
    const auto b = pwc::torus::contraction_trial_serial(kUnit, kNear, 2, Rational(8), 300, 42);
    CHECK(a.max_ratio == b.max_ratio);
    CHECK(a.argmax_trial == b.argmax_trial);
    const auto c = pwc::torus::contraction_trial(kUnit, kNear, 2, Rational(8), 300, 43);
    CHECK(c.max_ratio != a.max_ratio);
  }

  TEST_CASE("analytic gradient matches central differences") {
    const pwc::torus::LatticeModel m(kUnit, kNear, Rational(4));
    for (double p : {4.0, 6.0, 3.0}) {
      const pwc::torus::RatioObjective obj(m, p);
      for (std::uint64_t s = 0; s < 3; ++s) {
        const auto c = m.random_coefficients(21, s);
        std::vector<cplx> grad(c.size());
        obj.log_ratio(c, grad);
        for (std::size_t i = 0; i < c.size(); ++i) {
          for (const cplx dir : {cplx(1, 0), cplx(0, 1)}) {
            const double step = 1e-6;
            auto plus = c, minus = c;
            plus[i] += step * dir;
            minus[i] -= step * dir;
            const double fd = (obj.log_ratio(plus) - obj.log_ratio(minus)) / (2 * step);
            const double an = dir.real() * grad[i].real() + dir.imag() * grad[i].imag();
            CHECK(fd == doctest::Approx(an).epsilon(1e-5).scale(1e-6));
          }
        }
      }
    }
  }

  TEST_CASE("ratio_maximize") {
    const auto up = pwc::torus::ratio_maximize(kUnit, kNear, 2, Rational(8), 7);
    CHECK(up.ratio > 1.0 + 1e-4);
    for (std::size_t i = 1; i < up.best_so_far.size(); ++i) CHECK(up.best_so_far[i] >= up.best_so_far[i - 1]);

    const auto flat = pwc::torus::ratio_maximize(kUnit, kFar, 2, Rational(8), 7);
    CHECK(flat.ratio <= 1.0 + 1e-9);

    const auto orth = pwc::torus::ratio_maximize(kUnit, kNear, 1, Rational(8), 7);
    CHECK(orth.ratio <= 1.0 + 1e-12);
    CHECK(orth.ratio == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(pwc::torus::ratio_maximize(kUnit, iv({{4, Rational(65, 16)}}), 2, Rational(8), 1), pwc::PreconditionError);
  }
}
