#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fanoscope {

enum class ErrorCode {
  DivisionByZero,
  ArityError,
  CharacteristicTwo,
  InvalidField,
  NotContained,
  NotGeneral,
  PlaneContained,
  NotOnCubic,
  InternalInconsistency,
  NeedsExtension,
  InvalidInput,
  ResampleRequired,
  Degenerate,
  SingularFourfold,
  NeedsDifferentPrime,
  NonreducedZ,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fanoscope
