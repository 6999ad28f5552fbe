#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stacktor {

enum class ErrorCode {
  InvalidArgument,
  NonFiniteCokernel,
  NotInSupport,
  NoCommonCone,
  InvalidFan,
  RayMismatch,
  NoUnimodularTopCone,
  NonReduced,
  DimensionMismatch,
  ResourceLimit,
  Schema,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace stacktor
