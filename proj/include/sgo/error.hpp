#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sgo {

enum class ErrorCode {
  invalid_argument,
  enumeration_too_large,
  gap_unavailable,
  invalid_composition,
  invalid_weights,
  invalid_join,
  invalid_chain,
  oracle_unavailable,
  invalid_index_set,
  invalid_operator,
  invalid_config,
  invalid_space,
  degenerate_problem,
  invalid_comparison,
  unknown_problem,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` tells callers what went wrong.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sgo
