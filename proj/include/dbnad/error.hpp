#pragma once

#include <stdexcept>
#include <string>

namespace dbnad {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Graph invariant violated (cycle, self-loop, out-of-range node).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value, non positive-definite matrix or failed factorization.
class NumericError : public Error {
 public:
  using Error::Error;
  NumericError(const std::string& what, int time_index)
      : Error(what + " (t=" + std::to_string(time_index) + ")"), time_index_(time_index) {}
  int time_index() const { return time_index_; }

 private:
  int time_index_ = -1;
};

/// Malformed input files, archives or ledgers.
class DataError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dbnad
