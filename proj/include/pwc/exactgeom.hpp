#pragma once

// Exact algebra of finite unions of closed axis-aligned boxes with rational
// corners. Every operation here is float-free.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "pwc/rational.hpp"

namespace pwc {

/// Closed box [lo_0, hi_0] x ... x [lo_{d-1}, hi_{d-1}]. A box with
/// lo[i] == hi[i] on some axis is degenerate and has measure zero.
struct Box {
  std::vector<Rational> lo;
  std::vector<Rational> hi;

  Box() = default;
  Box(std::vector<Rational> lo_, std::vector<Rational> hi_);
  static Box interval(Rational a, Rational b);

  std::size_t dim() const { return lo.size(); }
  bool degenerate() const;
  Rational volume() const;

  friend bool operator==(const Box&, const Box&) = default;
};

/// Finite union of boxes of a common dimension; boxes may overlap. The empty
/// list is the empty set.
class BoxUnion {
 public:
  explicit BoxUnion(std::size_t dim = 1);
  BoxUnion(std::size_t dim, std::vector<Box> boxes);

  /// One-dimensional union of intervals.
  static BoxUnion intervals(std::initializer_list<std::pair<Rational, Rational>> ivs);
  /// The singleton {0}, as one degenerate box.
  static BoxUnion origin(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const std::vector<Box>& boxes() const { return boxes_; }
  bool empty() const { return boxes_.empty(); }
  std::size_t size() const { return boxes_.size(); }

  void add(Box b);

 private:
  std::size_t dim_;
  std::vector<Box> boxes_;
};

/// Lebesgue measure of the union, overlaps counted once.
Rational measure(const BoxUnion& a);

/// Same point set, rewritten as interior-disjoint boxes of positive measure
/// followed by the degenerate boxes not already contained in one of them.
/// The positive part is a slab decomposition (sweep along axis 0, merged
/// cross-sections), unless the input was already interior-disjoint with fewer
/// boxes, in which case its own boxes are kept.
BoxUnion normalize(const BoxUnion& a);

/// Pairwise box sums; the result is not normalized.
BoxUnion minkowski_sum(const BoxUnion& a, const BoxUnion& b);

/// normalize(minkowski_sum(a, b)) without materializing the raw sum.
BoxUnion normalized_sum(const BoxUnion& a, const BoxUnion& b);

/// {-x : x in A}.
BoxUnion reflect(const BoxUnion& a);

/// kA with 0A = {0}, (k+1)A = kA + A. Normalized for k >= 2.
BoxUnion iterate_sum(const BoxUnion& a, unsigned k);

/// The normalized sets kA + (k-1)(-A) for k = 1..k_max, built incrementally.
std::vector<BoxUnion> difference_sums(const BoxUnion& a, unsigned k_max);

/// Yields kA + (k-1)(-A) for k = 1, 2, ... one step at a time.
class DifferenceSumSequence {
 public:
  explicit DifferenceSumSequence(const BoxUnion& a);
  unsigned k() const { return k_; }
  const BoxUnion& current() const { return current_; }
  void advance();

 private:
  BoxUnion base_;
  BoxUnion neg_;
  BoxUnion current_;
  unsigned k_ = 1;
};

/// mes(A ∩ B).
Rational intersection_measure(const BoxUnion& a, const BoxUnion& b);

/// mes(A Δ B) = mes(A) + mes(B) - 2 mes(A ∩ B).
Rational symmetric_difference_measure(const BoxUnion& a, const BoxUnion& b);

/// Concatenation of the two box lists.
BoxUnion set_union(const BoxUnion& a, const BoxUnion& b);

/// Smallest box containing every box of the union, or nullopt when empty.
std::optional<Box> bounding_box(const BoxUnion& a);

/// Image under x -> scale * x + shift (scale != 0, applied on every axis).
BoxUnion affine_image(const BoxUnion& a, const Rational& scale, const std::vector<Rational>& shift);

/// True when every box of `inner` lies inside the closed box `outer`.
bool box_contains(const Box& outer, const Box& inner);

/// Largest-volume box of the union (first one on ties), nullopt when empty.
std::optional<Box> largest_box(const BoxUnion& a);

}  // namespace pwc
