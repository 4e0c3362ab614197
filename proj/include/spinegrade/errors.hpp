#pragma once

#include <stdexcept>
#include <string>

namespace sg {

// Invariant or precondition violation on domain data. Message names the field.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem / parse failure.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad experiment / model configuration. Maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A pipeline stage failed. Maps to CLI exit code 3.
struct StageError : std::runtime_error {
  StageError(const std::string& stage, const std::string& msg)
      : std::runtime_error("stage '" + stage + "': " + msg), stage_name(stage) {}
  std::string stage_name;
};

}  // namespace sg
