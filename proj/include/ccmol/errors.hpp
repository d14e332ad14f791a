#pragma once

#include <stdexcept>
#include <string>

namespace ccmol {

// Bad inputs: config values, inconsistent dataset entries, unusable requests.
// The CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Algorithm failed to converge or produced an unusable result at runtime.
// The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ccmol
