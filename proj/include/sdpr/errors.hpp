#pragma once

#include <stdexcept>
#include <string>

namespace sdpr {

// Malformed input data or a violated precondition on problem data.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative method failed in a way the caller cannot recover from.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A dense routine was asked to handle a problem beyond its size limit.
class SizeLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sdpr
