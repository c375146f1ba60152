#pragma once

#include <stdexcept>
#include <string>

namespace legdet {

// Bad input from the caller: wrong residue class, non-prime modulus, shape
// mismatch. The CLI maps this to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Two independent computations disagreed where they must not. Seeing this
// means the library is broken, not the input.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace legdet
