#pragma once

#include <stdexcept>

namespace ultrana {

// All library failures derive from Error so callers (the CLI in particular)
// can separate them from std::bad_alloc and friends.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

// Raised when two independent evaluation routes disagree; the caller is
// expected to retry at a higher precision.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

class ToleranceError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

}  // namespace ultrana
