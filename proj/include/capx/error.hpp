#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace capx {

// Caller passed arguments outside an operation's contract.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument lies outside the mathematical domain (pole hit, a <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A target function produced NaN somewhere it was sampled.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerically rank-deficient least-squares design.
class DegeneracyError : public std::runtime_error {
 public:
  DegeneracyError(const std::string& what, std::size_t rank,
                  std::vector<std::size_t> offending)
      : std::runtime_error(what), rank_(rank), offending_(std::move(offending)) {}

  std::size_t rank_estimate() const noexcept { return rank_; }
  // Column indices (in the caller's basis order) judged dependent.
  const std::vector<std::size_t>& offending_columns() const noexcept { return offending_; }

 private:
  std::size_t rank_;
  std::vector<std::size_t> offending_;
};

}  // namespace capx
