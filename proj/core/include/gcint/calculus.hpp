#pragma once

// Tangent-space projections, the projected vector derivative and
// differentials of smooth maps, all evaluated numerically at points.

#include <functional>
#include <optional>
#include <vector>

#include "gcint/algebra.hpp"

namespace gcint {

// Points are grade-1 multivectors of the ambient algebra.
using PointFunction = std::function<Multivector(const Multivector&)>;
using PointPredicate = std::function<bool(const Multivector&)>;
using ScalarFunction = std::function<double(const Multivector&)>;

class VectorField {
 public:
  VectorField(Algebra algebra, PointFunction eval, PointPredicate domain = {});

  // Throws DomainError outside the declared domain.
  Multivector operator()(const Multivector& x) const;
  bool in_domain(const Multivector& x) const { return !domain_ || domain_(x); }
  const Algebra& algebra() const { return algebra_; }

  static VectorField constant(const Multivector& value);

 private:
  Algebra algebra_;
  PointFunction eval_;
  PointPredicate domain_;
};

// Joint zero set of scalar constraints together with an oriented unit
// tangent pseudoscalar field.
struct ImplicitManifold {
  ImplicitManifold(Algebra ambient, int dim, std::function<Blade(const Multivector&)> pseudoscalar);

  // Flat subspace through the origin spanned by `pseudoscalar`, bounded only
  // by the optional domain predicate.
  static ImplicitManifold flat(const Blade& pseudoscalar, PointPredicate domain = {});

  Algebra ambient;
  int dim;
  std::vector<ScalarFunction> constraints;
  std::function<Blade(const Multivector&)> tangent_pseudoscalar;
  PointPredicate domain;
  // Nearest-point map back onto the manifold. When empty, fields are
  // evaluated off the manifold through their own ambient extension.
  PointFunction retraction;

  double constraint_residual(const Multivector& x) const;
  bool contains(const Multivector& x, double tol = 1e-9) const;
};

// p_B(a) = B^{-1} (B ⌊ a)
Multivector project(const Blade& blade, const Multivector& a);
// a - p_B(a); equals B^{-1}(B ∧ a) for vectors.
Multivector reject(const Blade& blade, const Multivector& a);

// Unit tangent pseudoscalar (∂m(x)) I of the level set m(x) = 0 inside the
// subspace with pseudoscalar I. Gradient by central differences.
Blade constraint_pseudoscalar(const ScalarFunction& m, const Multivector& x, const Blade& ambient_pseudoscalar,
                              std::optional<double> step = {});

// eps^{1/3} max(1, ||x||) for the second-order stencil, eps^{1/5} max(1, ||x||)
// for the fourth-order one.
double default_step(const Multivector& x, int order = 2);

struct DerivativeOptions {
  std::optional<double> step;
  // 2: [f(x+h) - f(x-h)] / 2h. 4: [8(f(x+h) - f(x-h)) - (f(x+2h) - f(x-2h))] / 12h.
  int order = 2;
  // Precondition tolerance on |m_j(x)|, scaled by max(1, ||x||^2).
  double on_manifold_tol = 1e-9;
};

// ∂_N f(x) = sum_i p(e_i) [f(x + h e_i) - f(x - h e_i)] / (2h), with the
// projection p frozen at x. Directions with p(e_i) = 0 are skipped.
Multivector vector_derivative(const VectorField& f, const ImplicitManifold& manifold, const Multivector& x,
                              const DerivativeOptions& options = {});

// Linear vector map stored by its images of the ambient basis, extended to
// all grades as an outermorphism.
class LinearMap {
 public:
  explicit LinearMap(std::vector<Multivector> images);
  static LinearMap identity(Algebra algebra);

  const Algebra& algebra() const { return images_.front().algebra(); }
  const Multivector& image(int i) const { return images_.at(static_cast<std::size_t>(i)); }

  // Outermorphism: blade-wise wedge of generator images; grade preserving.
  Multivector apply(const Multivector& a) const;
  Multivector operator()(const Multivector& a) const { return apply(a); }

  // <L(I_d) I_d^{-1}>_0
  double determinant() const;
  // Throws NotInvertible when |det| < 1e-12.
  LinearMap inverse() const;

 private:
  std::vector<Multivector> images_;
};

// Central-difference Jacobian of `map` at x.
LinearMap differential(const PointFunction& map, const Multivector& x, std::optional<double> step = {});

}  // namespace gcint
