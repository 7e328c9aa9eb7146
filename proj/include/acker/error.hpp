#pragma once

#include <stdexcept>
#include <string>

namespace acker {

// Invalid parameter or configuration supplied by the caller.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed or unusable input data (files, rows, coordinates).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace acker
