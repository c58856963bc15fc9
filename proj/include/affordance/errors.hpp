#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace affordance {

/// Malformed input file. `line()` is 1-based, 0 when the error is not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A token (or list of tokens) was not present where it was required.
class NotFoundError : public std::runtime_error {
 public:
  explicit NotFoundError(std::string token);
  NotFoundError(const std::string& what, std::vector<std::string> tokens);
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

 private:
  std::vector<std::string> tokens_;
};

/// Numerical precondition violated (zero vector, dimension mismatch, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace affordance
