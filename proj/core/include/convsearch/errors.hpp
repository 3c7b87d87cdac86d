#pragma once

#include <stdexcept>
#include <string>

namespace convsearch {

// Base class for everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments, bad configuration, violated preconditions. CLI exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// File missing, unreadable or unwritable. CLI exit code 2.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input file contents. CLI exit code 2.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Remote endpoint unreachable or returned garbage. CLI exit code 2.
class EndpointError : public Error {
 public:
  using Error::Error;
};

}  // namespace convsearch
