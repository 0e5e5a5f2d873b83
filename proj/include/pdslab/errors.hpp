#pragma once

#include <stdexcept>
#include <string>

namespace pdslab {

/// Error category carried by every pdslab exception; tests assert on the code,
/// messages are for humans.
enum class ErrorCode {
  argument,
  dimension_mismatch,
  structural,
  decode,
  encoding,
  singular_bias,
  unsupported_combination,
  support_overflow,
  ambiguous_cell,
  divergence,
  invalid_covariance_weight,
  degenerate_input,
  config,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace pdslab
