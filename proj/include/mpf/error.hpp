#pragma once

#include <stdexcept>
#include <string>

namespace mpf {

// Every failure raised by the library derives from Error so callers can map
// categories onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row)
      : Error(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// Violated precondition on an argument.
class ContractError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DegenerateError : public Error {
 public:
  using Error::Error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ContractError(msg);
}

}  // namespace mpf
