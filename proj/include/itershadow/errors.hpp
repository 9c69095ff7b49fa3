#pragma once

#include <stdexcept>
#include <string>

namespace itershadow {

/// Malformed or out-of-range arguments. Maps to CLI exit code 2.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation would exceed a configured size limit. Maps to exit code 3.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// Shadow requested past the top layer of the cube.
class LayerOverflowError : public InputError {
 public:
  explicit LayerOverflowError(const std::string& what) : InputError(what) {}
};

/// A stated hypothesis (e.g. j/n <= 1/10) is not met.
class HypothesisError : public InputError {
 public:
  explicit HypothesisError(const std::string& what) : InputError(what) {}
};

/// Input failed structural validation (e.g. a family that is not an up-set).
class ValidationError : public InputError {
 public:
  explicit ValidationError(const std::string& what) : InputError(what) {}
};

/// Root finding found no admissible parameter.
class InfeasibleError : public InputError {
 public:
  explicit InfeasibleError(const std::string& what) : InputError(what) {}
};

}  // namespace itershadow
