#pragma once

#include <stdexcept>
#include <string>

namespace rlxt {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input (reserved byte, bad edge list, truncated/corrupt index).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Index file magic or version does not match this build.
class VersionError : public FormatError {
 public:
  using FormatError::FormatError;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

// Argument is in range but violates an operation precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DeterminismError : public FormatError {
 public:
  using FormatError::FormatError;
};

class PreorderError : public FormatError {
 public:
  using FormatError::FormatError;
};

// phi() was asked for the successor of the co-lexicographically last node.
class NoSuccessorError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Exhaustive check refused because the input is too large.
class SizeError : public Error {
 public:
  using Error::Error;
};

}  // namespace rlxt
