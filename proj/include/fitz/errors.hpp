#pragma once

#include <stdexcept>
#include <string>

namespace fitz {

/// Classifies every failure mode surfaced by the library.
enum class ErrorCode {
  syntax_error,
  eval_error,
  dimension_mismatch,
  missing_key,
  negative_sigma,
  not_in_domain,
  not_in_graph,
  empty_graph,
  not_an_extension,
  no_solution_in_range,
  nowhere_finite,
  unsupported_kind,
  invalid_argument,
  io_error,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::syntax_error: return "syntax_error";
    case ErrorCode::eval_error: return "eval_error";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::missing_key: return "missing_key";
    case ErrorCode::negative_sigma: return "negative_sigma";
    case ErrorCode::not_in_domain: return "not_in_domain";
    case ErrorCode::not_in_graph: return "not_in_graph";
    case ErrorCode::empty_graph: return "empty_graph";
    case ErrorCode::not_an_extension: return "not_an_extension";
    case ErrorCode::no_solution_in_range: return "no_solution_in_range";
    case ErrorCode::nowhere_finite: return "nowhere_finite";
    case ErrorCode::unsupported_kind: return "unsupported_kind";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Expression text failed to parse; carries the byte offset of the failure.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error(ErrorCode::syntax_error,
              message + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class EvalError : public Error {
 public:
  explicit EvalError(const std::string& message)
      : Error(ErrorCode::eval_error, message) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& message)
      : Error(ErrorCode::dimension_mismatch, message) {}
};

class MissingKey : public Error {
 public:
  explicit MissingKey(const std::string& message)
      : Error(ErrorCode::missing_key, message) {}
};

class NegativeSigma : public Error {
 public:
  explicit NegativeSigma(const std::string& message)
      : Error(ErrorCode::negative_sigma, message) {}
};

class NotInDomain : public Error {
 public:
  explicit NotInDomain(const std::string& message)
      : Error(ErrorCode::not_in_domain, message) {}
};

class NotInGraph : public Error {
 public:
  explicit NotInGraph(const std::string& message)
      : Error(ErrorCode::not_in_graph, message) {}
};

class EmptyGraph : public Error {
 public:
  explicit EmptyGraph(const std::string& message)
      : Error(ErrorCode::empty_graph, message) {}
};

class NotAnExtension : public Error {
 public:
  explicit NotAnExtension(const std::string& message)
      : Error(ErrorCode::not_an_extension, message) {}
};

class NoSolutionInRange : public Error {
 public:
  NoSolutionInRange(const std::string& message, double scan_minimum)
      : Error(ErrorCode::no_solution_in_range, message),
        scan_minimum_(scan_minimum) {}

  /// Smallest |x + x* - z| seen during the scan.
  double scan_minimum() const noexcept { return scan_minimum_; }

 private:
  double scan_minimum_;
};

class NowhereFinite : public Error {
 public:
  explicit NowhereFinite(const std::string& message)
      : Error(ErrorCode::nowhere_finite, message) {}
};

class UnsupportedKind : public Error {
 public:
  explicit UnsupportedKind(const std::string& message)
      : Error(ErrorCode::unsupported_kind, message) {}
};

}  // namespace fitz
