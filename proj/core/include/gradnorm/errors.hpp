#pragma once

#include <stdexcept>
#include <string>

namespace gradnorm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad shapes, out-of-range parameters, violated preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An oracle returned NaN or Inf at iteration `k`.
class NumericFault : public Error {
 public:
  NumericFault(int k, const std::string& what);
  int iteration() const { return k_; }

 private:
  int k_;
};

// A certificate was handed a trace from a different method or horizon.
class MethodMismatch : public Error {
 public:
  using Error::Error;
};

// A certificate or envelope needs x*, f* or u* and the problem has none.
class MissingOptimum : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace gradnorm
