#pragma once

#include <stdexcept>
#include <string>

namespace chanlab {

enum class ErrorCode {
  degree_out_of_range,
  invalid_permutation,
  overflow,
  singular_gram,
  singular_marginal,
  dimension_mismatch,
  not_hermitian,
  non_real,
  not_isometry,
  invalid_triple,
  invalid_parameter,
  config,
  io,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::degree_out_of_range: return "degree-out-of-range";
    case ErrorCode::invalid_permutation: return "invalid-permutation";
    case ErrorCode::overflow: return "overflow";
    case ErrorCode::singular_gram: return "singular-gram";
    case ErrorCode::singular_marginal: return "singular-marginal";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::not_hermitian: return "not-hermitian";
    case ErrorCode::non_real: return "non-real";
    case ErrorCode::not_isometry: return "not-isometry";
    case ErrorCode::invalid_triple: return "invalid-triple";
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::config: return "config";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

}  // namespace chanlab
