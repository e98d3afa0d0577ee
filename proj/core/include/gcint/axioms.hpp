#pragma once

// Randomized check of the algebra axioms at one dimension.

#include <cstddef>
#include <cstdint>
#include <random>

#include "gcint/algebra.hpp"

namespace gcint {

struct AxiomResiduals {
  int dim = 0;
  std::size_t trials = 0;
  double tolerance = 1e-10;
  // Worst relative residuals.
  double associativity = 0.0;      // ||(ab)c - a(bc)|| / (||a|| ||b|| ||c||)
  double reverse = 0.0;            // ||rev(ab) - rev(b) rev(a)|| / (||a|| ||b||)
  double norm_positivity = 0.0;    // |A*A - sum of squares| / ||A||^2, inf if not positive
  double projection = 0.0;         // ||p(p(a)) - p(a)|| / ||a||
  std::size_t violations = 0;      // trials with any residual above tolerance
  bool passed() const { return violations == 0; }
};

// Uniform coefficients in [-1, 1] on every blade.
Multivector random_multivector(Algebra algebra, std::mt19937_64& rng);
Multivector random_vector(Algebra algebra, std::mt19937_64& rng);
// Outer product of k random vectors, retried until well conditioned.
Blade random_blade(Algebra algebra, int grade, std::mt19937_64& rng);

AxiomResiduals check_algebra_axioms(int dim, std::uint64_t seed, std::size_t trials, double tolerance = 1e-10);

}  // namespace gcint
