#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mmslab {

enum class ErrorCode {
  invalid_shape,
  asymmetric_matrix,
  nonzero_diagonal,
  negative_distance,
  non_finite_entry,
  triangle_violation,
  duplicate_points,
  invalid_measure,
  dimension_mismatch,
  index_out_of_range,
  domain_error,
  invalid_exponent,
  cross_check_mismatch,
  uncoverable,
  exact_search_budget_exceeded,
  empty_net,
  invalid_n,
  parse_error,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_shape: return "InvalidShape";
    case ErrorCode::asymmetric_matrix: return "AsymmetricMatrix";
    case ErrorCode::nonzero_diagonal: return "NonzeroDiagonal";
    case ErrorCode::negative_distance: return "NegativeDistance";
    case ErrorCode::non_finite_entry: return "NonFiniteEntry";
    case ErrorCode::triangle_violation: return "TriangleViolation";
    case ErrorCode::duplicate_points: return "DuplicatePoints";
    case ErrorCode::invalid_measure: return "InvalidMeasure";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::domain_error: return "DomainError";
    case ErrorCode::invalid_exponent: return "InvalidExponent";
    case ErrorCode::cross_check_mismatch: return "CrossCheckMismatch";
    case ErrorCode::uncoverable: return "Uncoverable";
    case ErrorCode::exact_search_budget_exceeded: return "ExactSearchBudgetExceeded";
    case ErrorCode::empty_net: return "EmptyNet";
    case ErrorCode::invalid_n: return "InvalidN";
    case ErrorCode::parse_error: return "ParseError";
  }
  return "Unknown";
}

// Base class of every error the library raises. The code is stable and is
// what the CLI reports; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mmslab
