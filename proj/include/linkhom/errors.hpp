#pragma once

#include <stdexcept>
#include <string>

namespace linkhom {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input supplied by a caller.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed; indicates a bug, never a verdict.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace linkhom
