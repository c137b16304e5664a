#pragma once

#include <stdexcept>
#include <string>

namespace mnl {

// Bad caller-supplied data: out-of-range entries, malformed assortments,
// unusable configuration.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A mathematical precondition failed at runtime: zero-probability outcome in a
// log loss, mismatched distribution supports.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// An enumeration guard tripped: the instance is too large for an exact method.
class CapacityError : public ValidationError {
 public:
  explicit CapacityError(const std::string& msg) : ValidationError(msg) {}
};

// An iterative solver hit its cap without meeting its convergence criterion.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mnl
