#pragma once

#include <stdexcept>
#include <string>

namespace filterlab {

// Base class for every contract violation raised by this library. Callers
// that only need "reject bad input, keep the process alive" can catch this
// one type; the subclasses exist so tests and the CLI can name the failure.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A weight vector contained a negative (or non-finite) entry.
class NegativeWeightError : public Error {
public:
  using Error::Error;
};

// Normalization was asked to rescale a vector of total mass zero.
class AllZeroMassError : public Error {
public:
  using Error::Error;
};

// Two measures (or a measure and a model) live on different grids.
class GridMismatchError : public Error {
public:
  using Error::Error;
};

// Discretization lost more probability mass past the grid hull than the
// configured per-row gate allows.
class TruncationExcessError : public Error {
public:
  using Error::Error;
};

// A config file failed to parse. Carries the offending line number.
class ParseError : public Error {
public:
  ParseError(const std::string& what, int line) : Error(what), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

// A structurally valid input violated a documented precondition.
class ValidationError : public Error {
public:
  using Error::Error;
};

}  // namespace filterlab
