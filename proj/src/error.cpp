#include "nnrank/error.hpp"

namespace nnr {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedScalar: return "MalformedScalar";
    case ErrorCode::WrongDomain: return "WrongDomain";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::BadPermutation: return "BadPermutation";
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::NegativeInput: return "NegativeInput";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::PreconditionNotCertified: return "PreconditionNotCertified";
    case ErrorCode::VarSpansMultipleRows: return "VarSpansMultipleRows";
    case ErrorCode::UnknownVar: return "UnknownVar";
    case ErrorCode::XiOutOfRange: return "XiOutOfRange";
    case ErrorCode::ValidationFailure: return "ValidationFailure";
    case ErrorCode::UnresolvedVariables: return "UnresolvedVariables";
    case ErrorCode::TraceMismatch: return "TraceMismatch";
    case ErrorCode::MalformedGraph: return "MalformedGraph";
    case ErrorCode::LoopEdge: return "LoopEdge";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidCover: return "InvalidCover";
    case ErrorCode::NotACover: return "NotACover";
    case ErrorCode::NotAClique: return "NotAClique";
    case ErrorCode::CertificateFailure: return "CertificateFailure";
    case ErrorCode::ReconstructionMismatch: return "ReconstructionMismatch";
  }
  return "Unknown";
}

}  // namespace nnr
