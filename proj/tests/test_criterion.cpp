#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "pwc/criterion.hpp"
#include "pwc/errors.hpp"

using pwc::BoxUnion;
using pwc::ExponentSpec;
using pwc::Rational;
using pwc::Verdict;

namespace {

BoxUnion iv(std::initializer_list<std::pair<Rational, Rational>> list) { return BoxUnion::intervals(list); }

bool same_set(const BoxUnion& a, const BoxUnion& b) { return pwc::symmetric_difference_measure(a, b) == Rational(0); }

// Pairs with disjoint supports, built by shifting B past A along axis 0.
std::pair<BoxUnion, BoxUnion> disjoint_pair(std::mt19937_64& rng, std::size_t max_dim) {
  auto in = oracle::random_instance(rng, max_dim, 3, 4);
  oracle::separate(in, rng);
  return {oracle::to_union(in.a, in.dim, in.den), oracle::to_union(in.b, in.dim, in.den)};
}

}  // namespace

TEST_SUITE("criterion") {
  TEST_CASE("exponent classification is exact") {
    CHECK(ExponentSpec::parse("4") == ExponentSpec::even(2));
    CHECK(ExponentSpec::parse("4/2") == ExponentSpec::even(1));
    CHECK(ExponentSpec::parse("6.0") == ExponentSpec::even(3));
    CHECK_FALSE(ExponentSpec::parse("3").is_even());
    CHECK_FALSE(ExponentSpec::parse("5/2").is_even());
    CHECK(ExponentSpec::parse("inf").is_infinite());
    CHECK(ExponentSpec::parse("infinity").is_infinite());
    CHECK(ExponentSpec::parse("1").value() == Rational(1));
    CHECK_THROWS(ExponentSpec::parse("1/2"));
    CHECK_THROWS(ExponentSpec::parse("zero"));
    CHECK_THROWS(ExponentSpec::even(0));
  }

  TEST_CASE("condition_set") {
    CHECK(same_set(pwc::condition_set(iv({{0, 1}}), 1), iv({{0, 1}})));
    CHECK(same_set(pwc::condition_set(iv({{0, 1}}), 3), iv({{-2, 3}})));
    CHECK(same_set(pwc::condition_set(iv({{0, 1}, {2, 3}}), 2), iv({{-3, 6}})));
  }

  TEST_CASE("decide: unit interval family") {
    for (int n = 1; n <= 6; ++n) {
      for (unsigned m = 1; m <= 8; ++m) {
        const auto c = pwc::decide(iv({{0, 1}}), iv({{n, n + 1}}), ExponentSpec::even(m));
        CHECK((c.verdict == Verdict::Contractive) == (static_cast<int>(m) <= n));
        CHECK((c.obstruction_measure == Rational(0)) == (c.verdict == Verdict::Contractive));
      }
    }
  }

  TEST_CASE("decide: p = 2, odd and infinite exponents") {
    const auto c2 = pwc::decide(iv({{0, 1}}), iv({{Rational(3, 2), Rational(5, 2)}}), ExponentSpec::even(1));
    CHECK(c2.verdict == Verdict::Contractive);
    CHECK(c2.obstruction_measure == Rational(0));

    const auto c3 = pwc::decide(iv({{0, 1}}), iv({{Rational(3, 2), Rational(5, 2)}}), ExponentSpec::parse("3"));
    CHECK(c3.verdict == Verdict::NotContractive);
    CHECK_FALSE(c3.condition_set.has_value());

    const auto null2 = pwc::decide(iv({{0, 1}}), iv({{4, 4}}), ExponentSpec::parse("3"));
    CHECK(null2.verdict == Verdict::Contractive);
    CHECK(null2.degenerate_reason == pwc::DegenerateReason::S2Null);
    const auto null1 = pwc::decide(iv({{0, 0}}), iv({{4, 5}}), ExponentSpec::infinity());
    CHECK(null1.verdict == Verdict::Contractive);
    CHECK(null1.degenerate_reason == pwc::DegenerateReason::S1Null);
    CHECK(pwc::decide(iv({{-1, 1}}), iv({{2, 3}}), ExponentSpec::infinity()).verdict == Verdict::NotContractive);
  }

  TEST_CASE("decide: hypotheses") {
    CHECK_THROWS_AS(pwc::decide(iv({{0, 2}}), iv({{1, 3}}), ExponentSpec::even(2)), pwc::OverlapError);
    CHECK_NOTHROW(pwc::decide(iv({{0, 1}}), iv({{1, 3}}), ExponentSpec::even(2)));
    CHECK_THROWS_AS(pwc::decide(iv({{0, 1}}), BoxUnion(2, {pwc::Box({2, 2}, {3, 3})}), ExponentSpec::even(2)),
                    pwc::DimensionMismatch);
  }

  TEST_CASE("max_contractive_even_k") {
    const auto a = pwc::max_contractive_even_k(iv({{0, 1}}), iv({{4, 5}}), 10);
    CHECK(a.max_k == 4u);
    CHECK_FALSE(a.saturated);
    const auto b = pwc::max_contractive_even_k(iv({{0, 1}}), iv({{4, 4}}), 10);
    CHECK(b.max_k == 10u);
    CHECK(b.saturated);
    const auto c = pwc::max_contractive_even_k(iv({{0, 1}}), iv({{Rational(3, 2), Rational(5, 2)}}), 10);
    CHECK(c.max_k == 1u);
    CHECK(c.obstruction.at(1) == Rational(1, 2));
  }

  TEST_CASE("monotonicity, affine invariance and p = 2 on random pairs") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 60; ++t) {
      const auto [s1, s2] = disjoint_pair(rng, 2);
      std::vector<Verdict> v;
      for (unsigned k = 1; k <= 6; ++k) v.push_back(pwc::decide(s1, s2, ExponentSpec::even(k)).verdict);
      CHECK(v[0] == Verdict::Contractive);
      for (std::size_t k = 1; k < v.size(); ++k) {
        if (v[k] == Verdict::Contractive) CHECK(v[k - 1] == Verdict::Contractive);
      }
      const Rational lambda(-3, 2);
      std::vector<Rational> tau(s1.dim(), Rational(7, 3));
      const BoxUnion t1 = pwc::affine_image(s1, lambda, tau);
      const BoxUnion t2 = pwc::affine_image(s2, lambda, tau);
      for (unsigned k = 1; k <= 4; ++k) CHECK(pwc::decide(t1, t2, ExponentSpec::even(k)).verdict == v[k - 1]);
    }
  }
}
