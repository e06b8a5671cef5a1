#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fuzzkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model violates a construction invariant (bad parameters, unresolved names, ...).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// An input value required for evaluation is absent.
class MissingInputError : public Error {
 public:
  explicit MissingInputError(std::string variable)
      : Error("missing input: " + variable), variable_(std::move(variable)) {}

  const std::string& variable() const noexcept { return variable_; }

 private:
  std::string variable_;
};

/// Evaluation failed (e.g. type reduction did not converge, unsupported request).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Syntax or semantic error in a textual model, with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(int line, int column, std::string message, std::vector<std::string> expected = {})
      : Error(format(line, column, message, expected)),
        line_(line),
        column_(column),
        message_(std::move(message)),
        expected_(std::move(expected)) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string format(int line, int column, const std::string& message,
                            const std::vector<std::string>& expected) {
    std::string out = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
    if (!expected.empty()) {
      out += " (expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) out += i + 1 == expected.size() ? " or " : ", ";
        out += expected[i];
      }
      out += ")";
    }
    return out;
  }

  int line_;
  int column_;
  std::string message_;
  std::vector<std::string> expected_;
};

}  // namespace fuzzkit
