#include "sparsetail/error.hpp"

namespace sparsetail {

std::string_view errcName(Errc code) {
  switch (code) {
    case Errc::NotMultipleOf3: return "NotMultipleOf3";
    case Errc::FactorTooSmall: return "FactorTooSmall";
    case Errc::RatioNotIncreasing: return "RatioNotIncreasing";
    case Errc::Infeasible: return "Infeasible";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::NotGoodInterval: return "NotGoodInterval";
    case Errc::NotAdmissible: return "NotAdmissible";
    case Errc::InvalidPattern: return "InvalidPattern";
    case Errc::NotMixing: return "NotMixing";
    case Errc::IllegalWord: return "IllegalWord";
    case Errc::InvalidPotential: return "InvalidPotential";
    case Errc::BandUnreachable: return "BandUnreachable";
    case Errc::CoreTooLong: return "CoreTooLong";
    case Errc::TargetOutOfRange: return "TargetOutOfRange";
    case Errc::PrefixTooShort: return "PrefixTooShort";
    case Errc::OrderTooSmall: return "OrderTooSmall";
    case Errc::WindowTooSmall: return "WindowTooSmall";
    case Errc::Format: return "Format";
    case Errc::Overflow: return "Overflow";
    case Errc::Config: return "Config";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errcName(code)) + ": " + message), code_(code) {}

}  // namespace sparsetail
