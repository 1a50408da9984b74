#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sparsetail {

enum class Errc {
  NotMultipleOf3,
  FactorTooSmall,
  RatioNotIncreasing,
  Infeasible,
  InvalidParams,
  OutOfRange,
  NotGoodInterval,
  NotAdmissible,
  InvalidPattern,
  NotMixing,
  IllegalWord,
  InvalidPotential,
  BandUnreachable,
  CoreTooLong,
  TargetOutOfRange,
  PrefixTooShort,
  OrderTooSmall,
  WindowTooSmall,
  Format,
  Overflow,
  Config,
};

std::string_view errcName(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sparsetail
