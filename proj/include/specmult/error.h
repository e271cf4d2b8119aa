// SPDX-License-Identifier: Apache-2.0
#ifndef SPECMULT_ERROR_H_
#define SPECMULT_ERROR_H_

#include <stdexcept>
#include <string>

namespace specmult {

// Raised for rejected inputs: bad shapes, out-of-range indices, partition
// mismatches, malformed files. The CLI maps it to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Raised when an iterative kernel fails to reach its tolerance. The CLI maps
// it to exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace specmult

#endif  // SPECMULT_ERROR_H_
