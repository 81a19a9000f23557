#pragma once

#include <stdexcept>
#include <string>

namespace ska {

enum class ErrorCode {
  parse_error,
  validation_error,
  dimension_mismatch,
  search_budget_exceeded,
  enumeration_cap_exceeded,
  rate_vector_infeasible,
  not_omniscient,
  no_witness,
  synthesis_failed,
  verification_failed,
  internal_inconsistency,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

// Internal invariant check. Violations mean a bug in this library, not bad
// input, so they map to their own error code.
inline void require_internal(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::internal_inconsistency, what);
}

}  // namespace ska
