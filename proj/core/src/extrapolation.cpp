#include "gcint/extrapolation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gcint {

namespace {

template <class T>
T neville_at_zero(std::span<const double> steps, std::span<const T> values) {
  if (steps.size() != values.size() || steps.empty()) {
    throw std::invalid_argument("extrapolate_to_zero: need matching, non-empty samples");
  }
  std::vector<T> p(values.begin(), values.end());
  const std::size_t n = steps.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      const double hi = steps[i];
      const double hj = steps[i + level];
      if (hi == hj) throw std::invalid_argument("extrapolate_to_zero: steps must be distinct");
      // P_{i..j}(0) = (h_j P_{i..j-1}(0) - h_i P_{i+1..j}(0)) / (h_j - h_i)
      p[i] = (p[i] * hj - p[i + 1] * hi) / (hj - hi);
    }
  }
  return p[0];
}

}  // namespace

double extrapolate_to_zero(std::span<const double> steps, std::span<const double> values) {
  return neville_at_zero<double>(steps, values);
}

Multivector extrapolate_to_zero(std::span<const double> steps, std::span<const Multivector> values) {
  return neville_at_zero<Multivector>(steps, values);
}

double convergence_order(std::span<const double> steps, std::span<const double> errors) {
  if (steps.size() != errors.size()) throw std::invalid_argument("convergence_order: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(errors[i] > 0.0) || !(steps[i] > 0.0)) continue;
    const double x = std::log(steps[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / denom;
}

}  // namespace gcint
