#pragma once

#include <stdexcept>
#include <string>

namespace projflat {

/// Evaluation outside a declared domain, or a non-finite intermediate value.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative kernel (quadrature, root finding) did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strong convexity fails: φ − sφ₂ or φ − sφ₂ + (b² − s²)φ₂₂ is not positive,
/// or the fundamental tensor is not positive definite.
class ConvexityError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace projflat
