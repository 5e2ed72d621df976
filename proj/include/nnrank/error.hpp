#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nnr {

enum class ErrorCode {
  MalformedScalar,
  WrongDomain,
  DivisionByZero,
  DimMismatch,
  BadPermutation,
  MalformedFile,
  NegativeInput,
  AlphaOutOfRange,
  PreconditionNotCertified,
  VarSpansMultipleRows,
  UnknownVar,
  XiOutOfRange,
  ValidationFailure,
  UnresolvedVariables,
  TraceMismatch,
  MalformedGraph,
  LoopEdge,
  TooLarge,
  InvalidCover,
  NotACover,
  NotAClique,
  CertificateFailure,
  ReconstructionMismatch,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nnr
