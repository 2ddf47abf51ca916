#pragma once

#include <stdexcept>
#include <string>

namespace qfreg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (non-finite entries, asymmetric
/// operators, out-of-range indices, unparsable files).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A brute-force routine was asked to run beyond its combinatorial limit.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace qfreg
