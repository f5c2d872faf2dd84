#pragma once

#include <stdexcept>
#include <string>

namespace sharplab {

// Mathematically invalid input: beta >= N, alpha outside the admissible
// range, infeasible profile, ...
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Evaluation failed even though the inputs were valid (overflow past the
// representable range, non-finite quadrature result).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sharplab
