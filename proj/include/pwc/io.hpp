#pragma once

// Set documents, report fragments and sweep tables.
//
// A set document is JSON:
//   {"dim": 1, "boxes": [[["0", "1/2"]], [[2, "2.75"]]]}
// Each box lists one [lo, hi] pair per dimension; in one dimension a bare
// [lo, hi] pair is accepted too. Endpoints are JSON integers or strings
// holding an integer, a decimal or "num/den". JSON floats are rejected.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "pwc/criterion.hpp"
#include "pwc/exactgeom.hpp"
#include "pwc/spectral.hpp"
#include "pwc/torus.hpp"
#include "pwc/witness.hpp"

namespace pwc::io {

using nlohmann::json;

/// Malformed set document. line and column are 1-based; 0 when unknown.
struct SetSpecError : std::invalid_argument {
  SetSpecError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line;
  std::size_t column;
};

BoxUnion parse_setspec(std::string_view text);
BoxUnion read_setspec_file(const std::string& path);
json setspec_json(const BoxUnion& s);
std::string serialize_setspec(const BoxUnion& s);

json boxes_json(const BoxUnion& s);
json to_json(const Certificate& c);
json to_json(const QuadratureResult& q);
json to_json(const Grid& g);
json to_json(const FunctionRecipe& r);
json to_json(const Witness& w);
json to_json(const torus::LatticeSpectrum& q);

/// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

struct SweepRow {
  unsigned k = 0;
  Rational obstruction{0};
  Verdict verdict = Verdict::Contractive;
};

/// Header k,p,obstruction_measure,verdict.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace pwc::io
