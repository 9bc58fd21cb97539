#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace tik {

// Error categories surfaced through the C API and the CLI exit codes.
enum class ErrorCategory {
  Internal,
  Parse,
  ElabArity,
  ElabDuality,
  ElabMultiplicity,
  EnvMissing,
  NotEqual,
  NoMatch,
  BadArgument,
  Io,
};

inline const char* category_name(ErrorCategory cat) {
  switch (cat) {
    case ErrorCategory::Internal: return "internal";
    case ErrorCategory::Parse: return "parse";
    case ErrorCategory::ElabArity: return "elaborate-arity";
    case ErrorCategory::ElabDuality: return "elaborate-duality";
    case ErrorCategory::ElabMultiplicity: return "elaborate-multiplicity";
    case ErrorCategory::EnvMissing: return "env-missing";
    case ErrorCategory::NotEqual: return "not-equal";
    case ErrorCategory::NoMatch: return "no-match";
    case ErrorCategory::BadArgument: return "bad-argument";
    case ErrorCategory::Io: return "io";
  }
  return "internal";
}

struct SourceSpan {
  std::size_t begin = 0;  // byte offsets into the expression text
  std::size_t end = 0;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory cat, std::string message)
      : std::runtime_error(std::move(message)), category_(cat) {}
  Error(ErrorCategory cat, std::string message, SourceSpan span)
      : std::runtime_error(std::move(message)), category_(cat), span_(span) {}

  ErrorCategory category() const { return category_; }
  const std::optional<SourceSpan>& span() const { return span_; }

 private:
  ErrorCategory category_;
  std::optional<SourceSpan> span_;
};

[[noreturn]] inline void fail(ErrorCategory cat, std::string message) {
  throw Error(cat, std::move(message));
}

}  // namespace tik
