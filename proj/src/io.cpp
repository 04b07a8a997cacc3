#include "pwc/io.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

namespace pwc::io {

namespace {

struct Position {
  std::size_t line = 0;
  std::size_t column = 0;
};

Position position_of(std::string_view text, std::size_t offset) {
  Position p{1, 1};
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++p.line;
      p.column = 1;
    } else {
      ++p.column;
    }
  }
  return p;
}

// Byte offsets of the scalar tokens inside the top-level "boxes" value, in
// document order. nlohmann::json keeps no source positions, so this light
// scan recovers them for diagnostics. Returns nothing on lexical surprises.
std::optional<std::vector<std::size_t>> boxes_scalar_offsets(std::string_view text) {
  std::vector<std::size_t> out;
  int depth = 0;
  int boxes_depth = -1;  // depth at which the boxes value opened
  bool want_boxes_value = false;
  std::optional<std::string> last_key_candidate;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '{' || c == '[') {
      if (want_boxes_value) {
        boxes_depth = depth;
        want_boxes_value = false;
      }
      ++depth;
      ++i;
      continue;
    }
    if (c == '}' || c == ']') {
      --depth;
      if (boxes_depth >= 0 && depth == boxes_depth) return out;
      ++i;
      continue;
    }
    if (c == ':') {
      if (depth == 1 && boxes_depth < 0 && last_key_candidate == "boxes") want_boxes_value = true;
      last_key_candidate.reset();
      ++i;
      continue;
    }
    if (c == ',') {
      last_key_candidate.reset();
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (c == '"') {
      std::string s;
      ++i;
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\\') ++i;
        if (i < text.size()) s.push_back(text[i]);
        ++i;
      }
      if (i >= text.size()) return std::nullopt;
      ++i;
      last_key_candidate = std::move(s);
    } else {
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
             std::string_view(",:]}").find(text[i]) == std::string_view::npos) {
        ++i;
      }
      last_key_candidate.reset();
    }
    if (want_boxes_value) return std::nullopt;  // scalar boxes value
    if (boxes_depth >= 0) out.push_back(start);
  }
  return std::nullopt;
}

class EndpointReader {
 public:
  explicit EndpointReader(std::string_view text) : text_(text), offsets_(boxes_scalar_offsets(text)) {}

  [[noreturn]] void fail(const std::string& what, std::size_t scalar_index) const {
    if (offsets_ && scalar_index < offsets_->size()) {
      const Position p = position_of(text_, (*offsets_)[scalar_index]);
      throw SetSpecError(what, p.line, p.column);
    }
    throw SetSpecError(what, 0, 0);
  }

  Rational read(const json& v, std::size_t scalar_index) const {
    if (v.is_number_integer()) {
      if (v.is_number_unsigned()) return Rational(mpq_class(mpz_class(std::to_string(v.get<std::uint64_t>()))));
      return Rational(static_cast<long>(v.get<std::int64_t>()));
    }
    if (v.is_number_float()) fail("endpoint is a JSON float; write it as a string such as \"0.25\" or \"1/4\"", scalar_index);
    if (v.is_string()) {
      if (auto r = Rational::try_parse(v.get<std::string>())) return *r;
      fail("endpoint \"" + v.get<std::string>() + "\" is not an integer, decimal or num/den", scalar_index);
    }
    fail("endpoint must be an integer or a string", scalar_index);
  }

 private:
  std::string_view text_;
  std::optional<std::vector<std::size_t>> offsets_;
};

std::string describe(const Rational& lo, const Rational& hi) { return "lo " + lo.to_string() + " > hi " + hi.to_string(); }

}  // namespace

SetSpecError::SetSpecError(const std::string& what, std::size_t line_, std::size_t column_)
    : std::invalid_argument(line_ > 0 ? "line " + std::to_string(line_) + ", column " + std::to_string(column_) + ": " + what
                                      : what),
      line(line_),
      column(column_) {}

BoxUnion parse_setspec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const Position p = position_of(text, e.byte > 0 ? e.byte - 1 : 0);
    throw SetSpecError(std::string("malformed JSON: ") + e.what(), p.line, p.column);
  }
  if (!doc.is_object()) throw SetSpecError("set document must be a JSON object", 1, 1);
  if (!doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1) {
    throw SetSpecError("\"dim\" must be a positive integer", 0, 0);
  }
  if (!doc.contains("boxes") || !doc["boxes"].is_array()) throw SetSpecError("\"boxes\" must be an array", 0, 0);
  const auto dim = static_cast<std::size_t>(doc["dim"].get<long long>());
  const EndpointReader reader(text);

  std::vector<Box> boxes;
  std::size_t scalar = 0;
  std::size_t index = 0;
  for (const json& jb : doc["boxes"]) {
    const bool bare = dim == 1 && jb.is_array() && jb.size() == 2 && !jb[0].is_array();
    if (!jb.is_array() || (!bare && jb.size() != dim)) {
      reader.fail("box " + std::to_string(index) + " must list " + std::to_string(dim) + " [lo, hi] pair(s)", scalar);
    }
    std::vector<Rational> lo, hi;
    for (std::size_t d = 0; d < dim; ++d) {
      const json& pair = bare ? jb : jb[d];
      if (!pair.is_array() || pair.size() != 2) reader.fail("box " + std::to_string(index) + ": expected a [lo, hi] pair", scalar);
      const std::size_t at = scalar;
      lo.push_back(reader.read(pair[0], scalar++));
      hi.push_back(reader.read(pair[1], scalar++));
      if (lo.back() > hi.back()) {
        reader.fail("box " + std::to_string(index) + ", axis " + std::to_string(d) + ": " + describe(lo.back(), hi.back()), at);
      }
    }
    boxes.emplace_back(std::move(lo), std::move(hi));
    ++index;
  }
  return BoxUnion(dim, std::move(boxes));
}

BoxUnion read_setspec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SetSpecError("cannot open set file " + path, 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_setspec(ss.str());
}

json boxes_json(const BoxUnion& s) {
  json arr = json::array();
  for (const Box& b : s.boxes()) {
    json jb = json::array();
    for (std::size_t d = 0; d < b.dim(); ++d) jb.push_back({b.lo[d].to_string(), b.hi[d].to_string()});
    arr.push_back(std::move(jb));
  }
  return arr;
}

json setspec_json(const BoxUnion& s) { return {{"dim", s.dim()}, {"boxes", boxes_json(s)}}; }

std::string serialize_setspec(const BoxUnion& s) { return setspec_json(s).dump(2); }

json to_json(const Certificate& c) {
  json j = {{"verdict", to_string(c.verdict)},
            {"exponent", c.exponent.to_string()},
            {"obstruction_measure", c.obstruction_measure.to_string()}};
  j["condition_set"] = c.condition_set ? boxes_json(*c.condition_set) : json(nullptr);
  j["degenerate_reason"] = c.degenerate_reason ? json(to_string(*c.degenerate_reason)) : json(nullptr);
  return j;
}

json to_json(const QuadratureResult& q) {
  return {{"value", {q.value.real(), q.value.imag()}},
          {"tail_bound", q.tail_bound},
          {"discretization_estimate", q.discretization_estimate},
          {"rounding_bound", q.rounding_bound},
          {"uncertainty", q.uncertainty()}};
}

json to_json(const Grid& g) { return {{"half_width", g.half_width}, {"samples", g.samples}}; }

json to_json(const FunctionRecipe& r) {
  json j = {{"form", r.name()}};
  if (const auto* v = std::get_if<recipe::IndicatorTransform>(&r.form)) j["set"] = setspec_json(v->set);
  if (const auto* v = std::get_if<recipe::DilatedH>(&r.form)) {
    j["n"] = v->n;
    j["scale"] = v->scale;
  }
  if (const auto* v = std::get_if<recipe::ModulatedBump>(&r.form)) {
    j["center"] = v->center;
    j["half_width"] = v->half_width;
    j["phase"] = v->phase;
  }
  if (const auto* v = std::get_if<recipe::ModulatedSinc>(&r.form)) {
    j["center"] = v->center;
    j["radius"] = v->radius;
  }
  return j;
}

json to_json(const Witness& w) {
  json j = {{"kind", to_string(w.kind)},
            {"f", to_json(w.f)},
            {"g", to_json(w.g)},
            {"frequency_frame", {{"center", w.frame.center}, {"radius", w.frame.radius}}},
            {"epsilon", w.epsilon},
            {"norm_before", to_json(w.norm_before)},
            {"norm_after", to_json(w.norm_after)},
            {"grid", to_json(w.grid)},
            {"certified", w.certified()}};
  j["pairing"] = w.pairing ? to_json(*w.pairing) : json(nullptr);
  j["predicted_pairing"] = w.predicted_pairing ? json(*w.predicted_pairing) : json(nullptr);
  j["support_point"] = w.support_point ? json(*w.support_point) : json(nullptr);
  return j;
}

json to_json(const torus::LatticeSpectrum& q) {
  json modes = json::array();
  for (const auto& m : q.modes) {
    modes.push_back({{"index", m.index},
                     {"band", m.band == torus::Band::S1 ? "S1" : "S2"},
                     {"amplitude", {m.amplitude.real(), m.amplitude.imag()}}});
  }
  return {{"period", q.period.to_string()}, {"modes", std::move(modes)}};
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "k,p,obstruction_measure,verdict\n";
  for (const auto& r : rows) os << r.k << ',' << 2 * r.k << ',' << r.obstruction.to_string() << ',' << to_string(r.verdict) << '\n';
}

}  // namespace pwc::io
