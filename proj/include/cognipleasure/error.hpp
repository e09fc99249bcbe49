#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cognipleasure {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid caller input: out-of-range values, mismatched lengths, bad pairings.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration document.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Rule-file syntax or semantic error, carrying a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message,
             const std::string& source = "")
      : Error((source.empty() ? "" : source + ":") + std::to_string(line) + ":" +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  /// The message without position or source prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

/// Tabular data error. Row and column are 1-based; row 1 is the header.
class DataError : public Error {
 public:
  DataError(std::size_t row, std::size_t column, const std::string& message)
      : Error("row " + std::to_string(row) + ", column " + std::to_string(column) + ": " + message),
        row_(row),
        column_(column) {}
  explicit DataError(const std::string& message) : Error(message), row_(0), column_(0) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

}  // namespace cognipleasure
