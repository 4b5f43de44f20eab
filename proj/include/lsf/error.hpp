#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lsf {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t col, std::string expected)
      : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + expected),
        line_(line), col_(col), expected_(std::move(expected)) {}

  std::size_t line() const { return line_; }
  std::size_t col() const { return col_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t line_;
  std::size_t col_;
  std::string expected_;
};

class UnboundName : public Error {
 public:
  explicit UnboundName(const std::string& name) : Error("unbound name " + name), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class OrderTooHigh : public Error {
 public:
  explicit OrderTooHigh(const std::string& meta)
      : Error("metavariable " + meta + " has a type of order greater than 2"), meta_(meta) {}
  const std::string& meta() const { return meta_; }

 private:
  std::string meta_;
};

class UnknownMeta : public Error {
 public:
  explicit UnknownMeta(const std::string& meta) : Error("unknown metavariable " + meta), meta_(meta) {}
  const std::string& meta() const { return meta_; }

 private:
  std::string meta_;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

}  // namespace lsf
