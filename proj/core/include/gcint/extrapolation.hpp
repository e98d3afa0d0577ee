#pragma once

#include <span>

#include "gcint/algebra.hpp"

namespace gcint {

// Richardson extrapolation to step -> 0 for samples whose error expands in
// integer powers of the step: the interpolating polynomial through
// (step_i, value_i) evaluated at zero (Neville's scheme). Steps need not be
// uniformly spaced but must be distinct.
double extrapolate_to_zero(std::span<const double> steps, std::span<const double> values);
Multivector extrapolate_to_zero(std::span<const double> steps, std::span<const Multivector> values);

// Least-squares slope of log(error) against log(step). Zero errors are
// skipped; needs at least two usable samples (otherwise returns NaN).
double convergence_order(std::span<const double> steps, std::span<const double> errors);

}  // namespace gcint
