#pragma once

#include <stdexcept>
#include <string>

namespace zetaflow {

/// Malformed input: bad weights, invalid spectra, unreadable documents.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical evaluation was requested outside the region where it is
/// defined or where the truncation can be certified.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An adaptive quadrature did not reach its tolerance.
class QuadratureError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace zetaflow
