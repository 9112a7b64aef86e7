#pragma once

#include <stdexcept>
#include <string>

namespace amrt {

/// Point or parameter lies outside the admissible geometric domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid argument to an operation (order out of range, truncation mismatch, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid run configuration or phantom description.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical stage of the reconstruction failed; carries the stage label.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace amrt
