#pragma once

#include <stdexcept>
#include <string>

namespace qmech {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched vector lengths between bids, workloads, speeds or payments.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the operation's mathematical domain (non-positive bid,
// wrong machine count, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class InconsistencyError : public Error {
 public:
  using Error::Error;
};

// A configured search budget was exhausted.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Step discovery could not resolve a breakpoint exactly.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant. Reaching one of these is a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qmech
