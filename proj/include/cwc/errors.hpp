#pragma once

#include <stdexcept>
#include <string>

namespace cwc {

enum class ErrorCode {
  UnsupportedDim,
  BadParameter,
  NonPositiveSupport,
  NotConstantWidth,
  SingularAffine,
  NoConvergence,
  ValidationFailed,
  OrbitNotFound,
  BasisMismatch,
  Io,
  Config,
};

inline const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedDim: return "UnsupportedDim";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::NonPositiveSupport: return "NonPositiveSupport";
    case ErrorCode::NotConstantWidth: return "NotConstantWidth";
    case ErrorCode::SingularAffine: return "SingularAffine";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::OrbitNotFound: return "OrbitNotFound";
    case ErrorCode::BasisMismatch: return "BasisMismatch";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cwc
