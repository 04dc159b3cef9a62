#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lmotif {

enum class ErrorCode {
  kInvalidArgument = 1,
  kIo,
  kInsufficientData,
  kInsufficientVocabulary,
  kInvalidTriad,
  kSchema,
  kDegenerateTraining,
  kInternal,
};

std::string_view error_code_name(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// C boundary can map it without string matching.
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

}  // namespace lmotif
