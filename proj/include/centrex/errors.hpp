#pragma once

#include <stdexcept>
#include <string>

namespace centrex {

// Base of every library-specific failure. Precondition violations on plain
// arguments use std::invalid_argument / std::domain_error instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// log h^u is undefined because some sample has h^u <= 0.
class NonPositiveHu : public Error {
 public:
  using Error::Error;
};

// A parameter search exhausted its budget.
class NotFound : public Error {
 public:
  using Error::Error;
};

// The endpoints handed to a bisection are not statistically of opposite sign.
class BracketInvalid : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace centrex
