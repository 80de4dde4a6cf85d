#pragma once

#include <stdexcept>
#include <string>

namespace vibench {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the location when it is known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, std::string field = {})
      : Error(format(what, line, field)), line_(line), field_(std::move(field)) {}

  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  static std::string format(const std::string& what, int line, const std::string& field) {
    std::string out = what;
    if (line > 0) out += " (line " + std::to_string(line) + ")";
    if (!field.empty()) out += " [field '" + field + "']";
    return out;
  }

  int line_;
  std::string field_;
};

/// Well-formed data that breaks a domain invariant (duplicate ids, bad labels).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Caller violated an operation precondition (shape mismatch, too few frames).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An external artifact (model weights, adapter output) is missing or does
/// not match its recorded fingerprint.
class LoadError : public Error {
 public:
  using Error::Error;
};

/// A numeric routine could not produce a result.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace vibench
