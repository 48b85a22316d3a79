#pragma once

#include <stdexcept>
#include <string>

namespace parcorr {

// Base for every error raised by the library. The CLI maps ConfigError to
// exit status 1 and every other Error to exit status 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or a measure incompatible with the data shape.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Dimension mismatch between operands.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A series with (numerically) zero variance reached an association measure.
class DegenerateSeries : public Error {
 public:
  using Error::Error;
};

// Least-squares problem without enough rows to be determined.
class IllConditioned : public Error {
 public:
  using Error::Error;
};

// Malformed input file. Row and column are 1-based; 0 means "not applicable".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row = 0, std::size_t col = 0)
      : Error(what), row_(row), col_(col) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Dataset failed structural validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace parcorr
