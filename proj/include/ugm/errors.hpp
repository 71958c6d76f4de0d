#pragma once

#include <stdexcept>
#include <string>

namespace ugm {

// Caller violated a precondition (dimension mismatch, bad parameter, bad config).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input data is unusable (bad labels, non-finite entries, unparsable file).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : DataError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column),
        message_(what) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

}  // namespace ugm
