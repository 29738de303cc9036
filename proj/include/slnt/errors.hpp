#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace slnt {

enum class ErrorCode {
  Parse,
  Usage,
  Domain,
  Frame,
  Convergence,
  IllConditioned,
  Resource,
  Oracle,
  Config,
};

constexpr std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Parse: return "PARSE";
    case ErrorCode::Usage: return "USAGE";
    case ErrorCode::Domain: return "DOMAIN";
    case ErrorCode::Frame: return "FRAME";
    case ErrorCode::Convergence: return "CONVERGENCE";
    case ErrorCode::IllConditioned: return "ILL_CONDITIONED";
    case ErrorCode::Resource: return "RESOURCE";
    case ErrorCode::Oracle: return "ORACLE";
    case ErrorCode::Config: return "CONFIG";
  }
  return "UNKNOWN";
}

/// Base for every error raised by the solver. The code is stable and
/// machine-readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(ErrorCode::Parse, message + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Raised when the k-iteration hits its cap before an order settles.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& message, int order, double previous, double last)
      : Error(ErrorCode::Convergence, message), order_(order), previous_(previous), last_(last) {}

  int order() const noexcept { return order_; }
  double previous_iterate() const noexcept { return previous_; }
  double last_iterate() const noexcept { return last_; }

 private:
  int order_;
  double previous_;
  double last_;
};

}  // namespace slnt
