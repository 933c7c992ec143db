#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace structprov {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in a JSON, XML or CSV document, or in a `.shape` file.
class MalformedDocument : public Error {
 public:
  MalformedDocument(std::string message, std::size_t line, std::size_t column)
      : Error(line == 0 ? message
                        : message + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// NaN or infinite numeric literal; these have no shape.
class UnrepresentableNumber : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

/// tag_of applied to a shape that has no tag (bottom or null).
class UndefinedTag : public Error {
 public:
  using Error::Error;
};

/// Global XML inference kept nesting records past its depth guard.
class DepthExceeded : public Error {
 public:
  using Error::Error;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

class FuelExhausted : public Error {
 public:
  explicit FuelExhausted(std::size_t steps)
      : Error("evaluation did not finish within " + std::to_string(steps) + " steps"), steps_(steps) {}
  std::size_t steps() const noexcept { return steps_; }

 private:
  std::size_t steps_;
};

/// The input handed to the safety checker is not a subshape of the samples.
class PremiseViolated : public Error {
 public:
  using Error::Error;
};

class RewriteNotFound : public Error {
 public:
  using Error::Error;
};

class FetchError : public Error {
 public:
  using Error::Error;
};

class UnknownMember : public Error {
 public:
  UnknownMember(const std::string& member, std::vector<std::string> suggestions)
      : Error("unknown member '" + member + "'" + joined(suggestions)), suggestions_(std::move(suggestions)) {}
  const std::vector<std::string>& suggestions() const noexcept { return suggestions_; }

 private:
  static std::string joined(const std::vector<std::string>& s) {
    if (s.empty()) return "";
    std::string out = "; did you mean: ";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + s[i];
    return out;
  }
  std::vector<std::string> suggestions_;
};

}  // namespace structprov
