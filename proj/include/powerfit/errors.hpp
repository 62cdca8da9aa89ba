#ifndef POWERFIT_ERRORS_HPP
#define POWERFIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace powerfit {

// Base of every error the library throws. Callers that only care about
// "bad input" vs "numerical failure" can catch DataError / NumericalError.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of a special function.
class DomainError : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string &msg, std::size_t line)
      : DataError("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DuplicateXError : public DataError {
 public:
  using DataError::DataError;
};

class EmptyInputError : public DataError {
 public:
  using DataError::DataError;
};

class EmptyResultError : public DataError {
 public:
  using DataError::DataError;
};

class InvalidParamsError : public DataError {
 public:
  using DataError::DataError;
};

class DegenerateInputError : public DataError {
 public:
  using DataError::DataError;
};

class NestingViolationError : public DataError {
 public:
  using DataError::DataError;
};

class NotConvergedError : public DataError {
 public:
  using DataError::DataError;
};

class ResourceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// The cutoff likelihood is maximised on the beta = 0 edge of the parameter
// space; the plain power-law fit is the right answer there.
class BoundaryError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace powerfit

#endif  // POWERFIT_ERRORS_HPP
