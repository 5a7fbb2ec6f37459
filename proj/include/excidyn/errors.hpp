#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace excidyn {

// Broad failure classes, used by the CLI to select process exit codes:
// config -> 2, numeric -> 3, io -> 4.
enum class ErrorCategory { config, numeric, io };

// Single exception type carrying a stable machine-readable code
// (e.g. "NotHermitian", "ConfigError") plus a human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail),
        category_(category),
        code_(std::move(code)),
        detail_(detail) {}

  ErrorCategory category() const noexcept { return category_; }
  const std::string& code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCategory category_;
  std::string code_;
  std::string detail_;
};

inline Error numeric_error(std::string code, const std::string& detail) {
  return Error(ErrorCategory::numeric, std::move(code), detail);
}

inline Error config_error(std::string code, const std::string& detail) {
  return Error(ErrorCategory::config, std::move(code), detail);
}

inline Error io_error(const std::string& detail) {
  return Error(ErrorCategory::io, "IoError", detail);
}

}  // namespace excidyn
