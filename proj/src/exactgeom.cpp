#include "pwc/exactgeom.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pwc/errors.hpp"

namespace pwc {

Box::Box(std::vector<Rational> lo_, std::vector<Rational> hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.size() != hi.size()) throw DimensionMismatch("Box: lo and hi differ in length");
  if (lo.empty()) throw std::invalid_argument("Box: dimension must be positive");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (hi[i] < lo[i]) {
      throw std::invalid_argument("Box: lo > hi on axis " + std::to_string(i) + " (" + lo[i].to_string() +
                                  " > " + hi[i].to_string() + ")");
    }
  }
}

Box Box::interval(Rational a, Rational b) { return Box({std::move(a)}, {std::move(b)}); }

bool Box::degenerate() const {
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (lo[i] == hi[i]) return true;
  }
  return false;
}

Rational Box::volume() const {
  Rational v(1);
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

BoxUnion::BoxUnion(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("BoxUnion: dimension must be positive");
}

BoxUnion::BoxUnion(std::size_t dim, std::vector<Box> boxes) : BoxUnion(dim) {
  boxes_.reserve(boxes.size());
  for (auto& b : boxes) add(std::move(b));
}

BoxUnion BoxUnion::intervals(std::initializer_list<std::pair<Rational, Rational>> ivs) {
  BoxUnion u(1);
  for (const auto& [a, b] : ivs) u.add(Box::interval(a, b));
  return u;
}

BoxUnion BoxUnion::origin(std::size_t dim) {
  std::vector<Rational> zero(dim, Rational(0));
  return BoxUnion(dim, {Box(zero, zero)});
}

void BoxUnion::add(Box b) {
  if (b.dim() != dim_) {
    throw DimensionMismatch("BoxUnion: box of dimension " + std::to_string(b.dim()) + " added to union of dimension " +
                            std::to_string(dim_));
  }
  boxes_.push_back(std::move(b));
}

namespace {

// Boxes stored row-major: box i occupies [i*d, (i+1)*d) of lo and hi. The
// scalar is either int64 (coordinates pre-multiplied by a per-axis common
// denominator) or Rational when that would overflow.
template <class S>
struct Flat {
  std::size_t d = 1;
  std::vector<S> lo;
  std::vector<S> hi;

  std::size_t size() const { return lo.size() / d; }

  bool full(std::size_t i) const {
    for (std::size_t a = 0; a < d; ++a) {
      if (!(lo[i * d + a] < hi[i * d + a])) return false;
    }
    return true;
  }

  void push(const S* l, const S* h) {
    lo.insert(lo.end(), l, l + d);
    hi.insert(hi.end(), h, h + d);
  }

  void push_from(const Flat& o, std::size_t i) { push(&o.lo[i * d], &o.hi[i * d]); }
};

// int64 coordinate v on axis a stands for v / den[a].
struct IntCodec {
  std::vector<mpz_class> den;

  Rational to_rational(std::size_t axis, std::int64_t v) const {
    return Rational(mpq_class(mpz_class(static_cast<long>(v)), den[axis]));
  }

  Rational volume_sum(const Flat<std::int64_t>& f, std::size_t first, std::size_t last) const {
    mpz_class total = 0;
    for (std::size_t i = first; i < last; ++i) {
      mpz_class v = 1;
      for (std::size_t a = 0; a < f.d; ++a) v *= mpz_class(static_cast<long>(f.hi[i * f.d + a] - f.lo[i * f.d + a]));
      total += v;
    }
    mpz_class scale = 1;
    for (const auto& d : den) scale *= d;
    return Rational(mpq_class(total, scale));
  }
};

struct RationalCodec {
  Rational to_rational(std::size_t, const Rational& v) const { return v; }

  Rational volume_sum(const Flat<Rational>& f, std::size_t first, std::size_t last) const {
    Rational total(0);
    for (std::size_t i = first; i < last; ++i) {
      Rational v(1);
      for (std::size_t a = 0; a < f.d; ++a) v *= f.hi[i * f.d + a] - f.lo[i * f.d + a];
      total += v;
    }
    return total;
  }
};

constexpr std::int64_t kIntLimit = std::int64_t{1} << 62;

std::vector<mpz_class> common_denominators(std::initializer_list<const BoxUnion*> unions, std::size_t d) {
  std::vector<mpz_class> den(d, mpz_class(1));
  for (const BoxUnion* u : unions) {
    for (const Box& b : u->boxes()) {
      for (std::size_t a = 0; a < d; ++a) {
        mpz_lcm(den[a].get_mpz_t(), den[a].get_mpz_t(), b.lo[a].raw().get_den_mpz_t());
        mpz_lcm(den[a].get_mpz_t(), den[a].get_mpz_t(), b.hi[a].raw().get_den_mpz_t());
      }
    }
  }
  return den;
}

bool scaled_fits(const Rational& r, const mpz_class& den, const mpz_class& limit) {
  mpz_class v = r.raw().get_num() * (den / r.raw().get_den());
  return abs(v) < limit;
}

bool fits_int64(std::initializer_list<const BoxUnion*> unions, const std::vector<mpz_class>& den,
                unsigned long growth) {
  const mpz_class limit = mpz_class(static_cast<long>(kIntLimit)) / mpz_class(std::max(growth, 1UL));
  for (const BoxUnion* u : unions) {
    for (const Box& b : u->boxes()) {
      for (std::size_t a = 0; a < den.size(); ++a) {
        if (!scaled_fits(b.lo[a], den[a], limit) || !scaled_fits(b.hi[a], den[a], limit)) return false;
      }
    }
  }
  return true;
}

Flat<std::int64_t> to_int_flat(const BoxUnion& u, const std::vector<mpz_class>& den) {
  Flat<std::int64_t> f;
  f.d = u.dim();
  f.lo.reserve(u.size() * f.d);
  f.hi.reserve(u.size() * f.d);
  auto conv = [&](const Rational& r, std::size_t a) {
    mpz_class v = r.raw().get_num() * (den[a] / r.raw().get_den());
    return static_cast<std::int64_t>(v.get_si());
  };
  for (const Box& b : u.boxes()) {
    for (std::size_t a = 0; a < f.d; ++a) f.lo.push_back(conv(b.lo[a], a));
    for (std::size_t a = 0; a < f.d; ++a) f.hi.push_back(conv(b.hi[a], a));
  }
  return f;
}

Flat<Rational> to_rational_flat(const BoxUnion& u) {
  Flat<Rational> f;
  f.d = u.dim();
  for (const Box& b : u.boxes()) {
    f.lo.insert(f.lo.end(), b.lo.begin(), b.lo.end());
    f.hi.insert(f.hi.end(), b.hi.begin(), b.hi.end());
  }
  return f;
}

template <class S, class Codec>
BoxUnion to_union(const Flat<S>& f, const Codec& codec) {
  std::vector<Box> boxes;
  boxes.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<Rational> lo(f.d), hi(f.d);
    for (std::size_t a = 0; a < f.d; ++a) {
      lo[a] = codec.to_rational(a, f.lo[i * f.d + a]);
      hi[a] = codec.to_rational(a, f.hi[i * f.d + a]);
    }
    boxes.emplace_back(std::move(lo), std::move(hi));
  }
  return BoxUnion(f.d, std::move(boxes));
}

// Runs f on int64 flats when all coordinates (times `growth`) fit, otherwise
// on Rational flats. f receives (codec, flats...).
template <class F>
auto dispatch1(const BoxUnion& a, unsigned long growth, F&& f) {
  auto den = common_denominators({&a}, a.dim());
  if (fits_int64({&a}, den, growth)) {
    IntCodec codec{den};
    return f(codec, to_int_flat(a, den));
  }
  return f(RationalCodec{}, to_rational_flat(a));
}

template <class F>
auto dispatch2(const BoxUnion& a, const BoxUnion& b, unsigned long growth, F&& f) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  auto den = common_denominators({&a, &b}, a.dim());
  if (fits_int64({&a, &b}, den, growth)) {
    IntCodec codec{den};
    return f(codec, to_int_flat(a, den), to_int_flat(b, den));
  }
  return f(RationalCodec{}, to_rational_flat(a), to_rational_flat(b));
}

// ---------------------------------------------------------------------------
// Rasterization over the compressed coordinate grid.

struct Run {
  std::uint32_t lo;
  std::uint32_t hi;
  friend bool operator==(const Run&, const Run&) = default;
};
using IndexBox = std::vector<Run>;

class Raster {
 public:
  Raster(std::size_t d, std::vector<std::size_t> cells) : d_(d), cells_(std::move(cells)), stride_(d) {
    std::size_t total = 1;
    for (std::size_t a = d_; a-- > 0;) {
      stride_[a] = total;
      const std::size_t extent = cells_[a] + 1;
      if (total > kMaxCells / extent) throw std::length_error("box union raster exceeds size limit");
      total *= extent;
    }
    count_.assign(total, 0);
  }

  // Marks cells [lo[a], hi[a]) on every axis via corner increments.
  void add(const std::uint32_t* lo, const std::uint32_t* hi) {
    const std::size_t corners = std::size_t{1} << d_;
    for (std::size_t mask = 0; mask < corners; ++mask) {
      std::size_t idx = 0;
      int sign = 1;
      for (std::size_t a = 0; a < d_; ++a) {
        if (mask & (std::size_t{1} << a)) {
          idx += hi[a] * stride_[a];
          sign = -sign;
        } else {
          idx += lo[a] * stride_[a];
        }
      }
      count_[idx] += sign;
    }
  }

  void accumulate() {
    for (std::size_t a = 0; a < d_; ++a) {
      const std::size_t extent = cells_[a] + 1;
      for (std::size_t idx = 0; idx < count_.size(); ++idx) {
        if ((idx / stride_[a]) % extent != 0) count_[idx] += count_[idx - stride_[a]];
      }
    }
  }

  std::vector<IndexBox> extract() const { return extract(0, 0); }

 private:
  static constexpr std::size_t kMaxCells = std::size_t{1} << 28;

  std::vector<IndexBox> extract(std::size_t axis, std::size_t base) const {
    std::vector<IndexBox> out;
    const std::size_t n = cells_[axis];
    if (axis + 1 == d_) {
      std::size_t i = 0;
      while (i < n) {
        if (count_[base + i * stride_[axis]] <= 0) {
          ++i;
          continue;
        }
        std::size_t j = i;
        while (j < n && count_[base + j * stride_[axis]] > 0) ++j;
        out.push_back({Run{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)}});
        i = j;
      }
      return out;
    }
    std::vector<IndexBox> group;
    std::size_t start = 0;
    auto flush = [&](std::size_t end) {
      for (const auto& sub : group) {
        IndexBox b;
        b.reserve(sub.size() + 1);
        b.push_back(Run{static_cast<std::uint32_t>(start), static_cast<std::uint32_t>(end)});
        b.insert(b.end(), sub.begin(), sub.end());
        out.push_back(std::move(b));
      }
    };
    for (std::size_t i = 0; i < n; ++i) {
      auto sub = extract(axis + 1, base + i * stride_[axis]);
      if (!group.empty() && sub == group) continue;
      flush(i);
      group = std::move(sub);
      start = i;
    }
    flush(n);
    return out;
  }

  std::size_t d_;
  std::vector<std::size_t> cells_;
  std::vector<std::size_t> stride_;
  std::vector<std::int32_t> count_;
};

template <class S>
bool interiors_overlap(const Flat<S>& f, std::size_t i, std::size_t j) {
  for (std::size_t a = 0; a < f.d; ++a) {
    const S& l = std::max(f.lo[i * f.d + a], f.lo[j * f.d + a]);
    const S& h = std::min(f.hi[i * f.d + a], f.hi[j * f.d + a]);
    if (!(l < h)) return false;
  }
  return true;
}

template <class S>
bool closed_contains(const Flat<S>& outer, std::size_t i, const Flat<S>& inner, std::size_t j) {
  const std::size_t d = outer.d;
  for (std::size_t a = 0; a < d; ++a) {
    if (inner.lo[j * d + a] < outer.lo[i * d + a] || outer.hi[i * d + a] < inner.hi[j * d + a]) return false;
  }
  return true;
}

// Positive-measure boxes of `f` rewritten as an interior-disjoint slab
// decomposition.
template <class S>
Flat<S> decompose_full(const Flat<S>& f, const std::vector<std::size_t>& full) {
  const std::size_t d = f.d;
  std::vector<std::vector<S>> coords(d);
  for (std::size_t a = 0; a < d; ++a) {
    coords[a].reserve(2 * full.size());
    for (std::size_t i : full) {
      coords[a].push_back(f.lo[i * d + a]);
      coords[a].push_back(f.hi[i * d + a]);
    }
    std::sort(coords[a].begin(), coords[a].end());
    coords[a].erase(std::unique(coords[a].begin(), coords[a].end()), coords[a].end());
  }
  std::vector<std::size_t> cells(d);
  for (std::size_t a = 0; a < d; ++a) cells[a] = coords[a].size() - 1;
  Raster raster(d, cells);
  std::vector<std::uint32_t> lo(d), hi(d);
  for (std::size_t i : full) {
    for (std::size_t a = 0; a < d; ++a) {
      const auto& c = coords[a];
      lo[a] = static_cast<std::uint32_t>(std::lower_bound(c.begin(), c.end(), f.lo[i * d + a]) - c.begin());
      hi[a] = static_cast<std::uint32_t>(std::lower_bound(c.begin(), c.end(), f.hi[i * d + a]) - c.begin());
    }
    raster.add(lo.data(), hi.data());
  }
  raster.accumulate();
  Flat<S> out;
  out.d = d;
  for (const IndexBox& ib : raster.extract()) {
    for (std::size_t a = 0; a < d; ++a) out.lo.push_back(coords[a][ib[a].lo]);
    for (std::size_t a = 0; a < d; ++a) out.hi.push_back(coords[a][ib[a].hi]);
  }
  return out;
}

// Returns the normalized union; `positive_count` receives the number of
// leading positive-measure boxes.
template <class S>
Flat<S> normalize_flat(const Flat<S>& f, std::size_t* positive_count = nullptr) {
  const std::size_t d = f.d;
  std::vector<std::size_t> full, degenerate;
  for (std::size_t i = 0; i < f.size(); ++i) (f.full(i) ? full : degenerate).push_back(i);

  Flat<S> out;
  out.d = d;
  if (!full.empty()) {
    out = decompose_full(f, full);
    if (out.size() > full.size()) {
      bool disjoint = true;
      for (std::size_t x = 0; x < full.size() && disjoint; ++x) {
        for (std::size_t y = x + 1; y < full.size(); ++y) {
          if (interiors_overlap(f, full[x], full[y])) {
            disjoint = false;
            break;
          }
        }
      }
      if (disjoint) {
        out.lo.clear();
        out.hi.clear();
        for (std::size_t i : full) out.push_from(f, i);
      }
    }
  }
  const std::size_t n_full = out.size();

  auto less = [&](std::size_t x, std::size_t y) {
    for (std::size_t a = 0; a < d; ++a) {
      if (f.lo[x * d + a] != f.lo[y * d + a]) return f.lo[x * d + a] < f.lo[y * d + a];
    }
    for (std::size_t a = 0; a < d; ++a) {
      if (f.hi[x * d + a] != f.hi[y * d + a]) return f.hi[x * d + a] < f.hi[y * d + a];
    }
    return false;
  };
  auto same = [&](std::size_t x, std::size_t y) { return !less(x, y) && !less(y, x); };
  std::sort(degenerate.begin(), degenerate.end(), less);
  degenerate.erase(std::unique(degenerate.begin(), degenerate.end(), same), degenerate.end());
  for (std::size_t j : degenerate) {
    bool covered = false;
    for (std::size_t i = 0; i < n_full && !covered; ++i) covered = closed_contains(out, i, f, j);
    if (!covered) out.push_from(f, j);
  }
  if (positive_count) *positive_count = n_full;
  return out;
}

template <class S>
Flat<S> sum_flat(const Flat<S>& a, const Flat<S>& b) {
  Flat<S> out;
  out.d = a.d;
  if (a.size() == 0 || b.size() == 0) return out;
  const std::size_t d = a.d;
  out.lo.reserve(a.size() * b.size() * d);
  out.hi.reserve(a.size() * b.size() * d);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      for (std::size_t k = 0; k < d; ++k) out.lo.push_back(a.lo[i * d + k] + b.lo[j * d + k]);
      for (std::size_t k = 0; k < d; ++k) out.hi.push_back(a.hi[i * d + k] + b.hi[j * d + k]);
    }
  }
  return out;
}

template <class S>
Flat<S> reflect_flat(const Flat<S>& a) {
  Flat<S> out;
  out.d = a.d;
  out.lo.reserve(a.lo.size());
  out.hi.reserve(a.hi.size());
  for (std::size_t i = 0; i < a.lo.size(); ++i) {
    out.lo.push_back(-a.hi[i]);
    out.hi.push_back(-a.lo[i]);
  }
  return out;
}

// Pairwise intersections of positive measure.
template <class S>
Flat<S> intersect_flat(const Flat<S>& a, const Flat<S>& b) {
  Flat<S> out;
  out.d = a.d;
  const std::size_t d = a.d;
  std::vector<S> lo(d), hi(d);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a.full(i)) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      bool nonempty = true;
      for (std::size_t k = 0; k < d && nonempty; ++k) {
        lo[k] = std::max(a.lo[i * d + k], b.lo[j * d + k]);
        hi[k] = std::min(a.hi[i * d + k], b.hi[j * d + k]);
        nonempty = lo[k] < hi[k];
      }
      if (nonempty) out.push(lo.data(), hi.data());
    }
  }
  return out;
}

template <class S, class Codec>
Rational measure_flat(const Flat<S>& f, const Codec& codec) {
  std::size_t n_full = 0;
  Flat<S> n = normalize_flat(f, &n_full);
  return codec.volume_sum(n, 0, n_full);
}

}  // namespace

Rational measure(const BoxUnion& a) {
  return dispatch1(a, 1, [](const auto& codec, const auto& f) { return measure_flat(f, codec); });
}

BoxUnion normalize(const BoxUnion& a) {
  return dispatch1(a, 1, [](const auto& codec, const auto& f) { return to_union(normalize_flat(f), codec); });
}

BoxUnion minkowski_sum(const BoxUnion& a, const BoxUnion& b) {
  return dispatch2(a, b, 2, [](const auto& codec, const auto& fa, const auto& fb) {
    return to_union(sum_flat(fa, fb), codec);
  });
}

BoxUnion normalized_sum(const BoxUnion& a, const BoxUnion& b) {
  return dispatch2(a, b, 2, [](const auto& codec, const auto& fa, const auto& fb) {
    return to_union(normalize_flat(sum_flat(fa, fb)), codec);
  });
}

DifferenceSumSequence::DifferenceSumSequence(const BoxUnion& a)
    : base_(normalize(a)), neg_(reflect(base_)), current_(base_) {}

void DifferenceSumSequence::advance() {
  current_ = normalized_sum(normalized_sum(current_, base_), neg_);
  ++k_;
}

BoxUnion reflect(const BoxUnion& a) {
  std::vector<Box> boxes;
  boxes.reserve(a.size());
  for (const Box& b : a.boxes()) {
    std::vector<Rational> lo(b.dim()), hi(b.dim());
    for (std::size_t i = 0; i < b.dim(); ++i) {
      lo[i] = -b.hi[i];
      hi[i] = -b.lo[i];
    }
    boxes.emplace_back(std::move(lo), std::move(hi));
  }
  return BoxUnion(a.dim(), std::move(boxes));
}

BoxUnion iterate_sum(const BoxUnion& a, unsigned k) {
  if (k == 0) return BoxUnion::origin(a.dim());
  if (k == 1) return a;
  return dispatch1(a, k, [k](const auto& codec, const auto& f) {
    auto base = normalize_flat(f);
    auto acc = base;
    for (unsigned j = 2; j <= k; ++j) acc = normalize_flat(sum_flat(acc, base));
    return to_union(acc, codec);
  });
}

std::vector<BoxUnion> difference_sums(const BoxUnion& a, unsigned k_max) {
  if (k_max == 0) return {};
  return dispatch1(a, 2UL * k_max, [k_max](const auto& codec, const auto& f) {
    std::vector<BoxUnion> out;
    out.reserve(k_max);
    auto base = normalize_flat(f);
    auto neg = reflect_flat(base);
    auto acc = base;
    out.push_back(to_union(acc, codec));
    for (unsigned k = 2; k <= k_max; ++k) {
      acc = normalize_flat(sum_flat(acc, base));
      acc = normalize_flat(sum_flat(acc, neg));
      out.push_back(to_union(acc, codec));
    }
    return out;
  });
}

Rational intersection_measure(const BoxUnion& a, const BoxUnion& b) {
  return dispatch2(a, b, 1, [](const auto& codec, const auto& fa, const auto& fb) {
    return measure_flat(intersect_flat(fa, fb), codec);
  });
}

Rational symmetric_difference_measure(const BoxUnion& a, const BoxUnion& b) {
  return measure(a) + measure(b) - Rational(2) * intersection_measure(a, b);
}

BoxUnion set_union(const BoxUnion& a, const BoxUnion& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("set_union: dimension mismatch");
  std::vector<Box> boxes = a.boxes();
  boxes.insert(boxes.end(), b.boxes().begin(), b.boxes().end());
  return BoxUnion(a.dim(), std::move(boxes));
}

std::optional<Box> bounding_box(const BoxUnion& a) {
  if (a.empty()) return std::nullopt;
  Box bb = a.boxes().front();
  for (const Box& b : a.boxes()) {
    for (std::size_t i = 0; i < a.dim(); ++i) {
      bb.lo[i] = min(bb.lo[i], b.lo[i]);
      bb.hi[i] = max(bb.hi[i], b.hi[i]);
    }
  }
  return bb;
}

BoxUnion affine_image(const BoxUnion& a, const Rational& scale, const std::vector<Rational>& shift) {
  if (scale.sign() == 0) throw std::invalid_argument("affine_image: zero scale");
  if (shift.size() != a.dim()) throw DimensionMismatch("affine_image: shift has wrong dimension");
  std::vector<Box> boxes;
  boxes.reserve(a.size());
  for (const Box& b : a.boxes()) {
    std::vector<Rational> lo(a.dim()), hi(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
      Rational x = scale * b.lo[i] + shift[i];
      Rational y = scale * b.hi[i] + shift[i];
      lo[i] = min(x, y);
      hi[i] = max(x, y);
    }
    boxes.emplace_back(std::move(lo), std::move(hi));
  }
  return BoxUnion(a.dim(), std::move(boxes));
}

bool box_contains(const Box& outer, const Box& inner) {
  if (outer.dim() != inner.dim()) throw DimensionMismatch("box_contains: dimension mismatch");
  for (std::size_t i = 0; i < outer.dim(); ++i) {
    if (inner.lo[i] < outer.lo[i] || outer.hi[i] < inner.hi[i]) return false;
  }
  return true;
}

std::optional<Box> largest_box(const BoxUnion& a) {
  if (a.empty()) return std::nullopt;
  const Box* best = &a.boxes().front();
  Rational best_volume = best->volume();
  for (const Box& b : a.boxes()) {
    Rational v = b.volume();
    if (best_volume < v) {
      best = &b;
      best_volume = std::move(v);
    }
  }
  return *best;
}

}  // namespace pwc
