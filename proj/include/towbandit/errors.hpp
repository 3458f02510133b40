#pragma once

#include <stdexcept>
#include <string>

namespace towbandit {

/// Raised for invalid experiment configurations (bad JSON, out-of-range
/// parameters). The CLI maps this to exit code 2; other runtime failures
/// exit with 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace towbandit
