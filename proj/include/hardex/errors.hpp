#pragma once

#include <stdexcept>
#include <string>

namespace hardex {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Node budget exhausted while tracing. The CLI maps this to exit code 2.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// A traced program asked a different question when replayed on the same
// decision prefix; the program is not deterministic.
class NondeterminismError : public Error {
 public:
  using Error::Error;
};

}  // namespace hardex
