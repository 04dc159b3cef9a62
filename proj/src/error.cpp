#include "lmotif/error.hpp"

namespace lmotif {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kInsufficientData: return "insufficient_data";
    case ErrorCode::kInsufficientVocabulary: return "insufficient_vocabulary";
    case ErrorCode::kInvalidTriad: return "invalid_triad";
    case ErrorCode::kSchema: return "schema_error";
    case ErrorCode::kDegenerateTraining: return "degenerate_training";
    case ErrorCode::kInternal: return "internal_error";
  }
  return "internal_error";
}

}  // namespace lmotif
