#pragma once

#include <stdexcept>
#include <string>

namespace gcint {

// Operands built over different algebras.
class AlgebraMismatch : public std::invalid_argument {
 public:
  explicit AlgebraMismatch(const std::string& what) : std::invalid_argument(what) {}
};

class NotInvertible : public std::domain_error {
 public:
  explicit NotInvertible(const std::string& what) : std::domain_error(what) {}
};

// Argument outside the domain of an operation (zero-norm logarithm,
// field evaluated outside its chart, on-cut evaluation, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

class StepUnderflow : public std::domain_error {
 public:
  explicit StepUnderflow(const std::string& what) : std::domain_error(what) {}
};

class DegenerateMeasure : public std::domain_error {
 public:
  explicit DegenerateMeasure(const std::string& what) : std::domain_error(what) {}
};

class BoundUnavailable : public std::runtime_error {
 public:
  explicit BoundUnavailable(const std::string& what) : std::runtime_error(what) {}
};

// An integration chain violates one of its structural invariants
// (dimension ladder, antiderivative check, continuity along a segment).
class ChainInvalid : public std::runtime_error {
 public:
  explicit ChainInvalid(const std::string& what) : std::runtime_error(what) {}
};

class OrientationError : public std::runtime_error {
 public:
  explicit OrientationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gcint
