#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skewgeo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax, unknown-identifier and arity errors raised while parsing an expression.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error("parse error at " + std::to_string(position) + ": " + message), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Evaluation outside the domain of a node (sqrt of a negative, log of a non-positive, ...).
class DomainError : public Error {
 public:
  DomainError(std::size_t position, const std::string& message)
      : Error("domain error at " + std::to_string(position) + ": " + message), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Rank-deficient pushforward or singular metric.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  SchemaError(const std::string& field, const std::string& message)
      : Error(field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Internal invariant broken (e.g. Q eigenvalue outside [-1, 0]).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace skewgeo
