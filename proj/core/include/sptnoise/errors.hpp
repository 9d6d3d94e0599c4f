#pragma once

#include <stdexcept>
#include <string>

namespace sptnoise {

/// Bad input: shapes, group mismatches, malformed files. CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical consistency check failed (non-injective state, degenerate
/// spectrum, disagreeing criteria). CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sptnoise
