#pragma once

#include <stdexcept>
#include <string>

namespace cfs {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Rejected input: malformed documents, bad parameters, mismatched operands.
class ValidationError : public Error {
public:
  using Error::Error;
};

// Well-formed input that cannot be computed as requested.
class ComputationError : public Error {
public:
  using Error::Error;
};

class InvalidWordError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class AlphabetMismatchError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class DimensionError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class HorizonError : public ComputationError {
public:
  using ComputationError::ComputationError;
};

class InsufficientHorizonError : public ComputationError {
public:
  using ComputationError::ComputationError;
};

class UnsupportedOperationError : public ComputationError {
public:
  using ComputationError::ComputationError;
};

} // namespace cfs
