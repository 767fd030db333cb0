#ifndef FSP_ERROR_HPP
#define FSP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace fsp {

// Error categories. Values are stable; the C API exposes them 1:1.
enum class ErrorCode {
  io = 1,
  format = 2,
  lookup = 3,
  dimension = 4,
  config = 5,
  training = 6,
  evaluation = 7,
  invalid_argument = 8,
  internal = 9,
};

// Machine-parsable name, e.g. "format_error".
const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace fsp

#endif
