#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adjamr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

class InvalidMaterialError : public Error {
 public:
  using Error::Error;
};

class DryCellError : public Error {
 public:
  using Error::Error;
};

class CflViolationError : public Error {
 public:
  CflViolationError(double courant, const std::string& what)
      : Error(what), courant_(courant) {}
  double courant() const { return courant_; }

 private:
  double courant_;
};

class NumericalBlowupError : public Error {
 public:
  using Error::Error;
};

/// Raised when coarse data needed for a ghost fill is not available.
class SchedulingError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ConfigError {
 public:
  ParseError(int line, const std::string& msg)
      : ConfigError("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class FormatError : public Error {
 public:
  FormatError(std::size_t offset, const std::string& msg)
      : Error("byte " + std::to_string(offset) + ": " + msg), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnsupportedConfigError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ComparisonError : public Error {
 public:
  using Error::Error;
};

}  // namespace adjamr
