#pragma once

#include <stdexcept>
#include <string>

namespace msst {

// Bad configuration or usage; maps to CLI exit code 1.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable or malformed input data; maps to CLI exit code 2.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace msst
