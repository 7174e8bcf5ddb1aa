#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fanoscope/forms.hpp"
#include "fanoscope/linalg.hpp"
#include "fanoscope/rationality.hpp"
#include "json.hpp"

namespace fanoscope::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kInputSchema = "fanoscope.input.v1";

// Input rejected by the schema; `pointer` is a JSON pointer to the field.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string pointer, const std::string& what) : std::runtime_error(what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

// Inputs in characteristic 2 are outside the theory.
class CharacteristicTwoInput : public std::runtime_error {
 public:
  CharacteristicTwoInput() : std::runtime_error("characteristic 2 is not supported") {}
};

enum class InputKind { Threefold, Fourfold };

// The field of an input. Finite fields use the canonical F_{p^k}; the user's
// modulus is honoured through the image `root` of its variable, so user
// coefficient vectors c map to sum c_i root^i.
class FieldSpec {
 public:
  std::uint32_t characteristic() const { return p_; }
  unsigned degree() const { return k_; }
  bool rational() const { return p_ == 0; }
  const Field& field() const { return *field_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  // Throws SchemaError at `pointer` for malformed values.
  Elt element(const nlohmann::json& value, const std::string& pointer) const;
  // Element in the user's basis: an integer over F_p, else k coefficients.
  Json to_json(Elt a) const;
  Json to_json(const Vec& v) const;

  static FieldSpec make(const nlohmann::json& j);

 private:
  std::uint32_t p_ = 0;
  unsigned k_ = 1;
  std::vector<std::uint32_t> modulus_;  // c_0 .. c_k, monic; empty for prime fields
  const Field* field_ = nullptr;
  std::vector<Elt> powers_;                      // root^i, i < k
  std::vector<std::vector<std::uint32_t>> user_;  // element code -> user coefficients
};

struct Input {
  std::string name;
  InputKind kind = InputKind::Threefold;
  FieldSpec field;
  std::optional<HomogeneousForm> cubic;  // finite field inputs
  Mat plane;
  std::optional<RationalForm> rational_cubic;  // characteristic 0 inputs
  QMat rational_plane;

  int num_vars() const { return kind == InputKind::Threefold ? 5 : 6; }
};

// Validates against fanoscope.input.v1. Throws SchemaError or
// CharacteristicTwoInput.
Input parse_input(const nlohmann::json& j);
Input load_input(const std::string& path);

Rat parse_rational(const nlohmann::json& value, const std::string& pointer);

}  // namespace fanoscope::cli
