#include "gcint/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gcint/calculus.hpp"

namespace gcint {

Multivector random_multivector(Algebra alg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  Multivector m(alg);
  for (BladeIndex b = 0; b < alg.blade_count(); ++b) m.set(b, coeff(rng));
  return m;
}

Multivector random_vector(Algebra alg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  Multivector v(alg);
  for (int i = 0; i < alg.dim(); ++i) v.set(BladeIndex{1} << i, coeff(rng));
  return v;
}

Blade random_blade(Algebra alg, int grade, std::mt19937_64& rng) {
  for (;;) {
    Multivector b = Multivector::scalar(alg, 1.0);
    double scale = 1.0;
    for (int k = 0; k < grade; ++k) {
      const Multivector v = random_vector(alg, rng);
      scale *= v.norm();
      b = outer_product(b, v);
    }
    // Skip nearly degenerate spans so the inverse stays accurate.
    if (b.norm() > 0.05 * scale) return Blade(b);
  }
}

AxiomResiduals check_algebra_axioms(int dim, std::uint64_t seed, std::size_t trials, double tolerance) {
  const Algebra alg(dim);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> grade_pick(1, dim);
  AxiomResiduals out;
  out.dim = dim;
  out.trials = trials;
  out.tolerance = tolerance;
  for (std::size_t t = 0; t < trials; ++t) {
    const Multivector a = random_multivector(alg, rng);
    const Multivector b = random_multivector(alg, rng);
    const Multivector c = random_multivector(alg, rng);

    const double assoc = ((a * b) * c - a * (b * c)).norm() / (a.norm() * b.norm() * c.norm());
    const double rev = ((a * b).reverse() - b.reverse() * a.reverse()).norm() / (a.norm() * b.norm());

    double sum_sq = 0.0;
    for (double x : a.coefficients()) sum_sq += x * x;
    const double aa = scalar_product(a, a);
    const double pos = aa > 0.0 ? std::abs(aa - sum_sq) / sum_sq : std::numeric_limits<double>::infinity();

    const Blade blade = random_blade(alg, grade_pick(rng), rng);
    const Multivector v = random_vector(alg, rng);
    const Multivector pv = project(blade, v);
    const double proj = (project(blade, pv) - pv).norm() / v.norm();

    out.associativity = std::max(out.associativity, assoc);
    out.reverse = std::max(out.reverse, rev);
    out.norm_positivity = std::max(out.norm_positivity, pos);
    out.projection = std::max(out.projection, proj);
    if (!(assoc <= tolerance && rev <= tolerance && pos <= tolerance && proj <= tolerance)) ++out.violations;
  }
  return out;
}

}  // namespace gcint
