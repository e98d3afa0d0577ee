#include "gcint/calculus.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "gcint/errors.hpp"

namespace gcint {

VectorField::VectorField(Algebra algebra, PointFunction eval, PointPredicate domain)
    : algebra_(algebra), eval_(std::move(eval)), domain_(std::move(domain)) {
  if (!eval_) throw std::invalid_argument("VectorField needs an evaluator");
}

Multivector VectorField::operator()(const Multivector& x) const {
  if (!in_domain(x)) throw DomainError("field evaluated outside its domain");
  return eval_(x);
}

VectorField VectorField::constant(const Multivector& value) {
  return VectorField(value.algebra(), [value](const Multivector&) { return value; });
}

ImplicitManifold::ImplicitManifold(Algebra ambient_algebra, int manifold_dim,
                                   std::function<Blade(const Multivector&)> pseudoscalar)
    : ambient(ambient_algebra), dim(manifold_dim), tangent_pseudoscalar(std::move(pseudoscalar)) {
  if (dim < 0 || dim > ambient.dim()) throw std::invalid_argument("manifold dimension out of range");
}

ImplicitManifold ImplicitManifold::flat(const Blade& pseudoscalar, PointPredicate domain) {
  const Blade unit = pseudoscalar.unit();
  ImplicitManifold m(unit.algebra(), unit.grade(), [unit](const Multivector&) { return unit; });
  if (unit.grade() < unit.algebra().dim()) {
    // Off the subspace exactly when the rejection is nonzero.
    m.constraints.push_back([unit](const Multivector& x) { return reject(unit, x).norm(); });
  }
  m.domain = std::move(domain);
  return m;
}

double ImplicitManifold::constraint_residual(const Multivector& x) const {
  double worst = 0.0;
  for (const auto& c : constraints) worst = std::max(worst, std::abs(c(x)));
  return worst;
}

bool ImplicitManifold::contains(const Multivector& x, double tol) const {
  const double scale = std::max(1.0, x.norm_squared());
  return constraint_residual(x) <= tol * scale && (!domain || domain(x));
}

Multivector project(const Blade& blade, const Multivector& a) {
  return inverse(blade.value()) * left_contraction(blade.value(), a);
}

Multivector reject(const Blade& blade, const Multivector& a) { return a - project(blade, a); }

double default_step(const Multivector& x, int order) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double base = order == 4 ? std::pow(eps, 0.2) : std::cbrt(eps);
  return base * std::max(1.0, x.norm());
}

namespace {

void check_step(const Multivector& x, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw StepUnderflow("finite-difference step must be positive");
  for (int i = 0; i < x.algebra().dim(); ++i) {
    const double xi = x[BladeIndex{1} << i];
    if ((xi + h) - xi == 0.0) throw StepUnderflow("finite-difference step lost against the coordinate");
  }
}

Multivector offset(const Multivector& x, int i, double h) {
  Multivector q = x;
  const BladeIndex b = BladeIndex{1} << i;
  q.set(b, x[b] + h);
  return q;
}

}  // namespace

Blade constraint_pseudoscalar(const ScalarFunction& m, const Multivector& x, const Blade& ambient_pseudoscalar,
                              std::optional<double> step) {
  const double h = step.value_or(default_step(x));
  check_step(x, h);
  const Algebra alg = x.algebra();
  Multivector grad(alg);
  for (int i = 0; i < alg.dim(); ++i) {
    const double d = (m(offset(x, i, h)) - m(offset(x, i, -h))) / (2.0 * h);
    grad.set(BladeIndex{1} << i, d);
  }
  // The gradient is taken inside the subspace.
  const Multivector g = project(ambient_pseudoscalar, grad);
  if (g.norm() == 0.0) throw DomainError("constraint gradient vanishes; level set is singular here");
  const Multivector tangent = (g * ambient_pseudoscalar.value()).grade(ambient_pseudoscalar.grade() - 1);
  return Blade(tangent / tangent.norm());
}

Multivector vector_derivative(const VectorField& f, const ImplicitManifold& manifold, const Multivector& x,
                              const DerivativeOptions& options) {
  if (!(f.algebra() == manifold.ambient) || !(x.algebra() == manifold.ambient)) {
    throw AlgebraMismatch("vector_derivative: field, manifold and point must share an algebra");
  }
  if (!manifold.contains(x, options.on_manifold_tol)) {
    throw DomainError("vector_derivative: point is not on the manifold");
  }
  if (options.order != 2 && options.order != 4) throw std::invalid_argument("vector_derivative: order must be 2 or 4");
  const double h = options.step.value_or(default_step(x, options.order));
  check_step(x, h);

  const Blade tangent = manifold.tangent_pseudoscalar(x);
  const Multivector tangent_inv = inverse(tangent.value());
  const Algebra alg = manifold.ambient;

  Multivector sum(alg);
  for (int i = 0; i < alg.dim(); ++i) {
    const Multivector e = Multivector::basis_vector(alg, i);
    const Multivector pe = tangent_inv * left_contraction(tangent.value(), e);
    if (pe.norm() <= 1e-14) continue;
    auto eval = [&](double t) {
      Multivector q = offset(x, i, t);
      if (manifold.retraction) q = manifold.retraction(q);
      if (manifold.domain && !manifold.domain(q)) {
        throw DomainError("vector_derivative: stencil leaves the manifold's chart domain");
      }
      return f(q);
    };
    if (options.order == 2) {
      sum += pe * ((eval(h) - eval(-h)) / (2.0 * h));
    } else {
      sum += pe * (((eval(h) - eval(-h)) * 8.0 - (eval(2.0 * h) - eval(-2.0 * h))) / (12.0 * h));
    }
  }
  return sum;
}

LinearMap::LinearMap(std::vector<Multivector> images) : images_(std::move(images)) {
  if (images_.empty()) throw std::invalid_argument("LinearMap needs basis images");
  const Algebra alg = images_.front().algebra();
  if (images_.size() != static_cast<std::size_t>(alg.dim())) {
    throw std::invalid_argument("LinearMap needs one image per generator");
  }
  for (const auto& img : images_) {
    if (!(img.algebra() == alg)) throw AlgebraMismatch("LinearMap images from different algebras");
    if (img.off_grade_residual(1) > 1e-12 * std::max(1.0, img.norm())) {
      throw std::invalid_argument("LinearMap images must be vectors");
    }
  }
}

LinearMap LinearMap::identity(Algebra algebra) {
  std::vector<Multivector> images;
  for (int i = 0; i < algebra.dim(); ++i) images.push_back(Multivector::basis_vector(algebra, i));
  return LinearMap(std::move(images));
}

Multivector LinearMap::apply(const Multivector& a) const {
  const Algebra alg = algebra();
  if (!(a.algebra() == alg)) throw AlgebraMismatch("LinearMap applied to a foreign multivector");
  Multivector out(alg);
  const auto coeffs = a.coefficients();
  for (BladeIndex blade = 0; blade < coeffs.size(); ++blade) {
    if (coeffs[blade] == 0.0) continue;
    Multivector term = Multivector::scalar(alg, coeffs[blade]);
    for (int i = 0; i < alg.dim(); ++i) {
      if (blade & (BladeIndex{1} << i)) term = outer_product(term, images_[static_cast<std::size_t>(i)]);
    }
    out += term;
  }
  return out;
}

double LinearMap::determinant() const {
  const Multivector ps = Multivector::pseudoscalar(algebra());
  return (apply(ps) * gcint::inverse(ps)).scalar_part();
}

LinearMap LinearMap::inverse() const {
  if (std::abs(determinant()) < 1e-12) throw NotInvertible("LinearMap is singular");
  const int d = algebra().dim();
  Eigen::MatrixXd m(d, d);
  for (int col = 0; col < d; ++col) {
    for (int row = 0; row < d; ++row) m(row, col) = images_[static_cast<std::size_t>(col)][BladeIndex{1} << row];
  }
  const Eigen::MatrixXd inv = m.fullPivLu().inverse();
  std::vector<Multivector> images;
  for (int col = 0; col < d; ++col) {
    Multivector img(algebra());
    for (int row = 0; row < d; ++row) img.set(BladeIndex{1} << row, inv(row, col));
    images.push_back(std::move(img));
  }
  return LinearMap(std::move(images));
}

LinearMap differential(const PointFunction& map, const Multivector& x, std::optional<double> step) {
  const double h = step.value_or(default_step(x));
  check_step(x, h);
  std::vector<Multivector> images;
  for (int i = 0; i < x.algebra().dim(); ++i) {
    images.push_back((map(offset(x, i, h)) - map(offset(x, i, -h))) / (2.0 * h));
  }
  return LinearMap(std::move(images));
}

}  // namespace gcint
