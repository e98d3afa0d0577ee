#include "gcint/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gcint/errors.hpp"

namespace gcint {

namespace {

void require_same(const Multivector& a, const Multivector& b, const char* op) {
  if (!(a.algebra() == b.algebra())) {
    throw AlgebraMismatch(std::string(op) + ": operands from algebras of dimension " +
                          std::to_string(a.algebra().dim()) + " and " +
                          std::to_string(b.algebra().dim()));
  }
}

// Bilinear extension of a basis-blade rule; Keep(ia, ib) selects which blade
// pairs contribute.
template <class Keep>
Multivector blade_product(const Multivector& a, const Multivector& b, Keep keep) {
  Multivector out(a.algebra());
  const auto ca = a.coefficients();
  const auto cb = b.coefficients();
  const auto n = static_cast<BladeIndex>(ca.size());
  // Accumulate into a local buffer, then copy once.
  Multivector::Storage acc(ca.size(), 0.0);
  for (BladeIndex ia = 0; ia < n; ++ia) {
    const double va = ca[ia];
    if (va == 0.0) continue;
    for (BladeIndex ib = 0; ib < n; ++ib) {
      const double vb = cb[ib];
      if (vb == 0.0 || !keep(ia, ib)) continue;
      acc[ia ^ ib] += reorder_sign(ia, ib) * va * vb;
    }
  }
  for (BladeIndex i = 0; i < n; ++i) {
    if (acc[i] != 0.0) out.set(i, acc[i]);
  }
  return out;
}

}  // namespace

const std::int8_t* reorder_sign_table() {
  static const std::vector<std::int8_t> table = [] {
    std::vector<std::int8_t> t(1u << 16);
    for (BladeIndex a = 0; a < 256; ++a) {
      for (BladeIndex b = 0; b < 256; ++b) t[(a << 8) | b] = static_cast<std::int8_t>(reorder_sign_slow(a, b));
    }
    return t;
  }();
  return table.data();
}

std::string blade_name(BladeIndex blade) {
  if (blade == 0) return "1";
  std::string name = "e";
  for (int i = 0; blade != 0; ++i, blade >>= 1) {
    if (blade & 1u) name += std::to_string(i + 1);
  }
  return name;
}

Algebra::Algebra(int dim) : dim_(dim) {
  if (dim < kMinDim || dim > kMaxDim) {
    throw std::invalid_argument("algebra dimension must be in [2, 8], got " + std::to_string(dim));
  }
}

Multivector::Multivector(Algebra algebra) : algebra_(algebra), coeffs_(algebra.blade_count(), 0.0) {}

Multivector Multivector::scalar(Algebra algebra, double value) {
  Multivector m(algebra);
  m.coeffs_[0] = value;
  return m;
}

Multivector Multivector::basis_vector(Algebra algebra, int index) {
  if (index < 0 || index >= algebra.dim()) {
    throw std::out_of_range("basis vector index " + std::to_string(index) + " out of range");
  }
  return basis_blade(algebra, BladeIndex{1} << index);
}

Multivector Multivector::basis_blade(Algebra algebra, BladeIndex blade, double coeff) {
  if (blade >= algebra.blade_count()) throw std::out_of_range("blade index out of range");
  Multivector m(algebra);
  m.coeffs_[blade] = coeff;
  return m;
}

Multivector Multivector::vector(Algebra algebra, std::span<const double> components) {
  if (components.size() != static_cast<std::size_t>(algebra.dim())) {
    throw std::invalid_argument("vector needs exactly dim components");
  }
  Multivector m(algebra);
  for (std::size_t i = 0; i < components.size(); ++i) m.coeffs_[BladeIndex{1} << i] = components[i];
  return m;
}

Multivector Multivector::pseudoscalar(Algebra algebra) {
  return basis_blade(algebra, algebra.pseudoscalar_blade());
}

Multivector& Multivector::set(BladeIndex blade, double value) {
  coeffs_.at(blade) = value;
  return *this;
}

Multivector Multivector::grade(int k) const {
  Multivector out(algebra_);
  for (BladeIndex i = 0; i < coeffs_.size(); ++i) {
    if (blade_grade(i) == k) out.coeffs_[i] = coeffs_[i];
  }
  return out;
}

Multivector Multivector::reverse() const {
  Multivector out(*this);
  for (BladeIndex i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] *= reverse_sign(blade_grade(i));
  return out;
}

Multivector Multivector::grade_involution() const {
  Multivector out(*this);
  for (BladeIndex i = 0; i < coeffs_.size(); ++i) {
    if (blade_grade(i) & 1) out.coeffs_[i] = -out.coeffs_[i];
  }
  return out;
}

double Multivector::norm_squared() const {
  double s = 0.0;
  for (double c : coeffs_) s += c * c;
  return s;
}

double Multivector::norm() const { return std::sqrt(norm_squared()); }

double Multivector::off_grade_residual(int k) const {
  double worst = 0.0;
  for (BladeIndex i = 0; i < coeffs_.size(); ++i) {
    if (blade_grade(i) != k) worst = std::max(worst, std::abs(coeffs_[i]));
  }
  return worst;
}

int Multivector::homogeneous_grade(double tol) const {
  const double scale = norm();
  if (scale == 0.0) return -1;
  int found = -1;
  for (int k = 0; k <= algebra_.dim(); ++k) {
    if (grade(k).norm() > tol * scale) {
      if (found >= 0) return -2;
      found = k;
    }
  }
  return found;
}

bool Multivector::is_zero(double tol) const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [tol](double c) { return std::abs(c) <= tol; });
}

Multivector Multivector::operator-() const {
  Multivector out(*this);
  for (double& c : out.coeffs_) c = -c;
  return out;
}

Multivector& Multivector::operator+=(const Multivector& other) {
  require_same(*this, other, "add");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& other) {
  require_same(*this, other, "subtract");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

Multivector& Multivector::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

Multivector& Multivector::operator/=(double s) {
  for (double& c : coeffs_) c /= s;
  return *this;
}

Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
Multivector operator*(Multivector a, double s) { return a *= s; }
Multivector operator*(double s, Multivector a) { return a *= s; }
Multivector operator/(Multivector a, double s) { return a /= s; }

Multivector operator+(Multivector a, double s) {
  a.set(0, a.scalar_part() + s);
  return a;
}

Multivector operator-(Multivector a, double s) {
  a.set(0, a.scalar_part() - s);
  return a;
}

Multivector operator*(const Multivector& a, const Multivector& b) {
  require_same(a, b, "geometric_product");
  return blade_product(a, b, [](BladeIndex, BladeIndex) { return true; });
}

Multivector outer_product(const Multivector& a, const Multivector& b) {
  require_same(a, b, "outer_product");
  return blade_product(a, b, [](BladeIndex ia, BladeIndex ib) { return (ia & ib) == 0; });
}

// For basis blades, <e_A e_B>_{|A|-|B|} is nonzero exactly when B ⊆ A.
Multivector left_contraction(const Multivector& a, const Multivector& b) {
  require_same(a, b, "left_contraction");
  return blade_product(a, b, [](BladeIndex ia, BladeIndex ib) { return (ia & ib) == ib; });
}

Multivector right_contraction(const Multivector& a, const Multivector& b) {
  require_same(a, b, "right_contraction");
  return blade_product(a, b, [](BladeIndex ia, BladeIndex ib) { return (ia & ib) == ia; });
}

double scalar_product(const Multivector& a, const Multivector& b) {
  require_same(a, b, "scalar_product");
  // <e_A ~e_A>_0 = +1 for every blade of a Euclidean algebra, so only the
  // diagonal survives.
  const auto ca = a.coefficients();
  const auto cb = b.coefficients();
  double s = 0.0;
  for (std::size_t i = 0; i < ca.size(); ++i) s += ca[i] * cb[i];
  return s;
}

Multivector dual(const Multivector& a) { return a * Multivector::pseudoscalar(a.algebra()); }

Multivector inverse(const Multivector& a) {
  const Multivector rev = a.reverse();
  const Multivector aa = a * rev;
  const double n2 = a.norm_squared();
  const double s = aa.scalar_part();
  if (n2 == 0.0 || s == 0.0) throw NotInvertible("inverse of a zero multivector");
  if (aa.off_grade_residual(0) > 1e-10 * n2) {
    throw NotInvertible("A ~A is not a scalar; element is not a versor or blade");
  }
  return rev / s;
}

Multivector exp_bivector(const Multivector& bivector) {
  const double scale = bivector.norm();
  if (bivector.off_grade_residual(2) > 1e-12 * std::max(1.0, scale)) {
    throw DomainError("exp_bivector: argument is not a bivector");
  }
  const Multivector sq = bivector * bivector;
  if (sq.off_grade_residual(0) > 1e-10 * std::max(1.0, scale * scale) || sq.scalar_part() > 0.0) {
    throw DomainError("exp_bivector: B^2 is not a non-positive scalar");
  }
  const double theta = std::sqrt(-sq.scalar_part());
  Multivector out = bivector * (theta == 0.0 ? 1.0 : std::sin(theta) / theta);
  return out + std::cos(theta);
}

namespace {

struct SpinorSplit {
  double re;
  double im;
};

SpinorSplit split_spinor(const Multivector& spinor, const Multivector& plane) {
  require_same(spinor, plane, "log_spinor");
  const Multivector sq = plane * plane;
  if (plane.off_grade_residual(2) > 1e-12 || std::abs(sq.scalar_part() + 1.0) > 1e-9 ||
      sq.off_grade_residual(0) > 1e-9) {
    throw DomainError("log_spinor: plane must be a unit bivector blade");
  }
  const double norm_r = spinor.norm();
  if (norm_r == 0.0) throw DomainError("log_spinor: zero-norm argument");
  const double re = spinor.scalar_part();
  const double im = scalar_product(spinor, plane);
  const Multivector rest = spinor - Multivector::scalar(spinor.algebra(), re) - plane * im;
  if (rest.norm() > 1e-10 * norm_r) {
    throw DomainError("log_spinor: argument not in span{1, plane}");
  }
  return {re, im};
}

}  // namespace

double spinor_angle(const Multivector& spinor, const Multivector& plane, double branch_start) {
  const auto [re, im] = split_spinor(spinor, plane);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double phi = std::atan2(im, re);
  double t = std::fmod(phi - branch_start, two_pi);
  if (t < 0.0) t += two_pi;
  if (t == 0.0) t = two_pi;
  return branch_start + t;
}

Multivector log_spinor(const Multivector& spinor, const Multivector& plane, double branch_start) {
  const double phi = spinor_angle(spinor, plane, branch_start);
  return plane * phi + std::log(spinor.norm());
}

Blade::Blade(Multivector value, double tol) : value_(std::move(value)), grade_(0) {
  const int g = value_.homogeneous_grade(tol);
  if (g == -1) throw DomainError("blade: zero multivector");
  if (g == -2) throw DomainError("blade: mixed-grade multivector");
  grade_ = g;
  const Multivector bb = value_ * value_.reverse();
  if (bb.off_grade_residual(0) > tol * value_.norm_squared()) {
    throw DomainError("blade: B ~B is not scalar; element is not simple");
  }
}

Blade Blade::unit() const { return Blade(Checked{}, value_ / value_.norm(), grade_); }

Blade Blade::operator-() const { return Blade(Checked{}, -value_, grade_); }

}  // namespace gcint
