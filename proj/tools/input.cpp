#include "input.hpp"

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace fanoscope::cli {
namespace {

constexpr std::uint32_t kMaxFieldSize = 1u << 16;

std::string at(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

std::int64_t integer(const nlohmann::json& v, const std::string& pointer) {
  if (!v.is_number_integer()) throw SchemaError(pointer, "expected an integer");
  return v.get<std::int64_t>();
}

const nlohmann::json& member(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw SchemaError(std::string("/") + key, std::string("missing required field '") + key + "'");
  return j.at(key);
}

std::uint32_t reduce(std::int64_t v, std::uint32_t p) {
  const std::int64_t r = v % static_cast<std::int64_t>(p);
  return static_cast<std::uint32_t>(r < 0 ? r + p : r);
}

int rational_rank(QMat rows) {
  int r = 0;
  const std::size_t n = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < n && r < static_cast<int>(rows.size()); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(i) == r || rows[i][c] == 0) continue;
      const Rat f = rows[i][c] / rows[r][c];
      for (std::size_t k = 0; k < n; ++k) rows[i][k] -= f * rows[r][k];
    }
    ++r;
  }
  return r;
}

}  // namespace

Rat parse_rational(const nlohmann::json& value, const std::string& pointer) {
  if (value.is_number_integer()) return Rat(value.get<std::int64_t>());
  if (!value.is_string()) throw SchemaError(pointer, "expected an integer or a string \"a/b\"");
  static const std::regex re(R"(^(-?[0-9]+)(/([0-9]+))?$)");
  std::smatch m;
  const std::string s = value.get<std::string>();
  if (!std::regex_match(s, m, re)) throw SchemaError(pointer, "malformed rational \"" + s + "\"");
  const Int num(m[1].str());
  const Int den(m[3].matched ? m[3].str() : std::string("1"));
  if (den == 0) throw SchemaError(pointer, "zero denominator");
  return Rat(num, den);
}

FieldSpec FieldSpec::make(const nlohmann::json& j) {
  FieldSpec fs;
  const std::int64_t p = integer(member(j, "characteristic"), "/characteristic");
  if (p == 2) throw CharacteristicTwoInput();
  if (p < 0 || (p != 0 && !is_prime(static_cast<std::uint64_t>(p))))
    throw SchemaError("/characteristic", "characteristic must be 0 or a prime");
  if (p >= kMaxFieldSize) throw SchemaError("/characteristic", "characteristic is too large");
  fs.p_ = static_cast<std::uint32_t>(p);
  if (!j.contains("modulus")) {
    if (p != 0) fs.field_ = &Field::get(fs.p_, 1);
    return fs;
  }
  if (p == 0) throw SchemaError("/modulus", "a modulus needs a positive characteristic");
  const auto& m = j.at("modulus");
  if (!m.is_array() || m.size() < 2) throw SchemaError("/modulus", "expected coefficients c_0 .. c_k with k >= 1");
  for (std::size_t i = 0; i < m.size(); ++i) fs.modulus_.push_back(reduce(integer(m[i], at("/modulus", i)), fs.p_));
  if (fs.modulus_.back() != 1) throw SchemaError(at("/modulus", m.size() - 1), "modulus must be monic");
  fs.k_ = static_cast<unsigned>(m.size() - 1);
  std::uint64_t q = 1;
  for (unsigned i = 0; i < fs.k_; ++i) {
    q *= fs.p_;
    if (q > kMaxFieldSize) throw SchemaError("/modulus", "field is too large");
  }
  const Field& F = Field::get(fs.p_, fs.k_);
  fs.field_ = &F;
  // The smallest element of the canonical field that is a root of the
  // modulus and lies in no proper subfield; none means m is reducible.
  std::optional<Elt> root;
  for (Elt a = 0; a < F.size() && !root; ++a) {
    Elt v = 0;
    for (std::size_t i = fs.modulus_.size(); i-- > 0;) v = F.add(F.mul(v, a), F.from_int(fs.modulus_[i]));
    if (v != 0) continue;
    bool proper = false;
    for (unsigned d = 1; d < fs.k_; ++d) proper = proper || (fs.k_ % d == 0 && F.frobenius(a, d) == a);
    if (!proper) root = a;
  }
  if (!root) throw SchemaError("/modulus", "modulus is not irreducible over F_" + std::to_string(fs.p_));
  fs.powers_.push_back(F.one());
  for (unsigned i = 1; i < fs.k_; ++i) fs.powers_.push_back(F.mul(fs.powers_.back(), *root));
  fs.user_.assign(F.size(), {});
  std::vector<std::uint32_t> c(fs.k_, 0);
  for (std::uint32_t n = 0; n < F.size(); ++n) {
    std::uint32_t r = n;
    Elt e = 0;
    for (unsigned i = 0; i < fs.k_; ++i) {
      c[i] = r % fs.p_;
      r /= fs.p_;
      e = F.add(e, F.mul(F.from_int(c[i]), fs.powers_[i]));
    }
    fs.user_[e] = c;
  }
  return fs;
}

Elt FieldSpec::element(const nlohmann::json& value, const std::string& pointer) const {
  const Field& F = *field_;
  if (value.is_number_integer()) return F.from_int(reduce(value.get<std::int64_t>(), p_));
  if (k_ == 1 || !value.is_array()) {
    throw SchemaError(pointer, k_ == 1 ? "expected an integer" : "expected an integer or a coefficient array");
  }
  if (value.size() > k_) throw SchemaError(pointer, "more coefficients than the field degree");
  Elt e = 0;
  for (std::size_t i = 0; i < value.size(); ++i) {
    e = F.add(e, F.mul(F.from_int(reduce(integer(value[i], at(pointer, i)), p_)), powers_[i]));
  }
  return e;
}

Json FieldSpec::to_json(Elt a) const {
  if (k_ == 1) return static_cast<std::int64_t>(a);
  return Json(user_[a]);
}

Json FieldSpec::to_json(const Vec& v) const {
  Json out = Json::array();
  for (Elt a : v) out.push_back(to_json(a));
  return out;
}

Input parse_input(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("", "expected a JSON object");
  const auto& schema = member(j, "schema");
  if (!schema.is_string() || schema.get<std::string>() != kInputSchema)
    throw SchemaError("/schema", std::string("expected \"") + kInputSchema + "\"");
  Input in;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw SchemaError("/name", "expected a string");
    in.name = j.at("name").get<std::string>();
  }
  const auto& kind = member(j, "kind");
  if (kind == "threefold") {
    in.kind = InputKind::Threefold;
  } else if (kind == "fourfold") {
    in.kind = InputKind::Fourfold;
  } else {
    throw SchemaError("/kind", "expected \"threefold\" or \"fourfold\"");
  }
  in.field = FieldSpec::make(j);
  const bool rational = in.field.rational();
  if (rational && in.kind != InputKind::Threefold) throw SchemaError("/characteristic", "characteristic 0 is supported for threefolds only");
  const int n = in.num_vars();

  const auto& terms = member(j, "terms");
  if (!terms.is_array() || terms.empty()) throw SchemaError("/terms", "expected a nonempty array of [exponent, value] pairs");
  if (rational) {
    in.rational_cubic = RationalForm(n, 3);
  } else {
    in.cubic = HomogeneousForm(in.field.field(), n, 3);
  }
  std::set<Exponent> seen;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string ptr = at("/terms", t);
    const auto& term = terms[t];
    if (!term.is_array() || term.size() != 2) throw SchemaError(ptr, "expected [exponent, value]");
    const auto& ex = term[0];
    if (!ex.is_array() || ex.size() != static_cast<std::size_t>(n))
      throw SchemaError(ptr + "/0", "expected " + std::to_string(n) + " exponents");
    Exponent e{};
    int total = 0;
    for (int i = 0; i < n; ++i) {
      const std::int64_t v = integer(ex[i], at(ptr + "/0", i));
      if (v < 0 || v > 3) throw SchemaError(at(ptr + "/0", i), "exponent out of range");
      e[i] = static_cast<std::uint8_t>(v);
      total += static_cast<int>(v);
    }
    if (total != 3) throw SchemaError(ptr + "/0", "exponents must sum to 3");
    if (!seen.insert(e).second) throw SchemaError(ptr + "/0", "duplicate exponent");
    if (rational) {
      in.rational_cubic->add_term(e, parse_rational(term[1], ptr + "/1"));
    } else {
      in.cubic->add_term(e, in.field.element(term[1], ptr + "/1"));
    }
  }

  const auto& plane = member(j, "plane");
  if (!plane.is_array() || plane.size() != 3) throw SchemaError("/plane", "expected three rows");
  for (std::size_t r = 0; r < 3; ++r) {
    const std::string ptr = at("/plane", r);
    if (!plane[r].is_array() || plane[r].size() != static_cast<std::size_t>(n))
      throw SchemaError(ptr, "expected " + std::to_string(n) + " entries");
    if (rational) {
      QVec row;
      for (int i = 0; i < n; ++i) row.push_back(parse_rational(plane[r][i], at(ptr, i)));
      in.rational_plane.push_back(row);
    } else {
      Vec row;
      for (int i = 0; i < n; ++i) row.push_back(in.field.element(plane[r][i], at(ptr, i)));
      in.plane.push_back(row);
    }
  }
  const int r = rational ? rational_rank(in.rational_plane) : rank(in.field.field(), in.plane);
  if (r != 3) throw SchemaError("/plane", "rows do not span a plane");
  return in;
}

Input load_input(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw SchemaError("", "cannot read input file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_input(j);
}

}  // namespace fanoscope::cli
