#include "sgo/error.hpp"

namespace sgo {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::enumeration_too_large: return "enumeration-too-large";
    case ErrorCode::gap_unavailable: return "gap-unavailable";
    case ErrorCode::invalid_composition: return "invalid-composition";
    case ErrorCode::invalid_weights: return "invalid-weights";
    case ErrorCode::invalid_join: return "invalid-join";
    case ErrorCode::invalid_chain: return "invalid-chain";
    case ErrorCode::oracle_unavailable: return "oracle-unavailable";
    case ErrorCode::invalid_index_set: return "invalid-index-set";
    case ErrorCode::invalid_operator: return "invalid-operator";
    case ErrorCode::invalid_config: return "invalid-config";
    case ErrorCode::invalid_space: return "invalid-space";
    case ErrorCode::degenerate_problem: return "degenerate-problem";
    case ErrorCode::invalid_comparison: return "invalid-comparison";
    case ErrorCode::unknown_problem: return "unknown-problem";
  }
  return "unknown-error";
}

}  // namespace sgo
