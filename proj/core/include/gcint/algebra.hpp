#pragma once

// Dense Clifford algebra over Euclidean R^d, 2 <= d <= 8.
//
// A multivector stores one real coefficient per basis blade. Blades are
// indexed by a bitset: bit i set means generator e_{i+1} is a factor, and
// the factors are taken in ascending order (e1e3, never e3e1). Products
// reduce to that order by counting transpositions; every generator squares
// to +1.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>

#include <boost/container/small_vector.hpp>

namespace gcint {

using BladeIndex = std::uint32_t;

inline int blade_grade(BladeIndex blade) { return std::popcount(blade); }

// Sign picked up when reordering e_a e_b into ascending generator order.
inline int reorder_sign_slow(BladeIndex a, BladeIndex b) {
  int swaps = 0;
  for (a >>= 1; a != 0; a >>= 1) swaps += std::popcount(a & b);
  return (swaps & 1) ? -1 : 1;
}

// Table lookup of reorder_sign_slow for blades of at most 8 generators.
const std::int8_t* reorder_sign_table();

inline int reorder_sign(BladeIndex a, BladeIndex b) { return reorder_sign_table()[(a << 8) | b]; }

// (-1)^{k(k-1)/2}
inline int reverse_sign(int grade) { return ((grade * (grade - 1) / 2) & 1) ? -1 : 1; }

// "1", "e1", "e12", "e135", ...
std::string blade_name(BladeIndex blade);

class Algebra {
 public:
  static constexpr int kMinDim = 2;
  static constexpr int kMaxDim = 8;

  // Throws std::invalid_argument when dim is outside [2, 8].
  explicit Algebra(int dim);

  int dim() const { return dim_; }
  std::size_t blade_count() const { return std::size_t{1} << dim_; }
  BladeIndex pseudoscalar_blade() const { return static_cast<BladeIndex>(blade_count() - 1); }

  friend bool operator==(const Algebra&, const Algebra&) = default;

 private:
  int dim_;
};

class Multivector {
 public:
  using Storage = boost::container::small_vector<double, 16>;

  // Zero of the 2-D algebra; a placeholder until assigned.
  Multivector() : Multivector(Algebra(2)) {}
  explicit Multivector(Algebra algebra);

  static Multivector scalar(Algebra algebra, double value);
  // Generator e_{index+1}.
  static Multivector basis_vector(Algebra algebra, int index);
  static Multivector basis_blade(Algebra algebra, BladeIndex blade, double coeff = 1.0);
  static Multivector vector(Algebra algebra, std::span<const double> components);
  // e1 e2 ... e_d
  static Multivector pseudoscalar(Algebra algebra);

  const Algebra& algebra() const { return algebra_; }
  std::span<const double> coefficients() const { return {coeffs_.data(), coeffs_.size()}; }
  double operator[](BladeIndex blade) const { return coeffs_[blade]; }
  double scalar_part() const { return coeffs_[0]; }

  // Builder-style setter, used while assembling a value.
  Multivector& set(BladeIndex blade, double value);

  // <A>_k
  Multivector grade(int k) const;
  Multivector reverse() const;
  Multivector grade_involution() const;

  // ||A||^2 = <A ~A>_0, which for a Euclidean metric is the coefficient sum of squares.
  double norm_squared() const;
  double norm() const;

  // Largest |coefficient| over blades whose grade differs from k.
  double off_grade_residual(int k) const;
  // -1 for the zero multivector, -2 for mixed grade (relative tolerance on the norm).
  int homogeneous_grade(double tol = 1e-12) const;
  bool is_zero(double tol = 0.0) const;

  Multivector operator-() const;
  Multivector& operator+=(const Multivector& other);
  Multivector& operator-=(const Multivector& other);
  Multivector& operator*=(double s);
  Multivector& operator/=(double s);

  friend bool operator==(const Multivector&, const Multivector&) = default;

 private:
  Algebra algebra_;
  Storage coeffs_;
};

Multivector operator+(Multivector a, const Multivector& b);
Multivector operator-(Multivector a, const Multivector& b);
Multivector operator*(Multivector a, double s);
Multivector operator*(double s, Multivector a);
Multivector operator/(Multivector a, double s);
Multivector operator+(Multivector a, double s);
Multivector operator-(Multivector a, double s);

// Geometric product.
Multivector operator*(const Multivector& a, const Multivector& b);
inline Multivector geometric_product(const Multivector& a, const Multivector& b) { return a * b; }

Multivector outer_product(const Multivector& a, const Multivector& b);

// A ⌊ B = sum_{r>=s} < <A>_r <B>_s >_{r-s}: the right operand lowers the
// grade of the left one, so (e1∧e2) ⌊ e2 = e1.
Multivector left_contraction(const Multivector& a, const Multivector& b);

// A ⌋ B = sum_{s>=r} < <A>_r <B>_s >_{s-r}: the left operand lowers the
// grade of the right one, so e2 ⌋ (e1∧e2) = -e1.
Multivector right_contraction(const Multivector& a, const Multivector& b);

inline Multivector grade_select(const Multivector& a, int k) { return a.grade(k); }
inline Multivector reverse(const Multivector& a) { return a.reverse(); }

// A * B = <A ~B>_0
double scalar_product(const Multivector& a, const Multivector& b);
inline double norm(const Multivector& a) { return a.norm(); }
inline double distance(const Multivector& a, const Multivector& b) { return (a - b).norm(); }

// A I_d (right multiplication by the unit pseudoscalar).
Multivector dual(const Multivector& a);

// ~A / (A ~A). Throws NotInvertible unless A ~A is a scalar, with the
// non-scalar residual below 1e-10 ||A||^2 and the scalar itself nonzero.
Multivector inverse(const Multivector& a);

// exp(B) for B with B^2 = -theta^2: cos(theta) + B sin(theta)/theta.
// Throws DomainError if B is not a bivector squaring to a non-positive scalar.
Multivector exp_bivector(const Multivector& bivector);

// Logarithm in the even subalgebra span{1, I}, I a unit bivector (I^2 = -1):
// for R = |R|(cos phi + I sin phi) returns log|R| + phi I with phi taken in
// the branch interval (branch_start, branch_start + 2 pi].
inline constexpr double kDefaultBranchStart = -2.0 * std::numbers::pi;
Multivector log_spinor(const Multivector& spinor, const Multivector& plane,
                       double branch_start = kDefaultBranchStart);

// Angle phi of log_spinor, without the magnitude part.
double spinor_angle(const Multivector& spinor, const Multivector& plane,
                    double branch_start = kDefaultBranchStart);

// Checked simple k-vector (houses unit pseudoscalars and measure directions).
class Blade {
 public:
  // Throws DomainError unless `value` is a nonzero single-grade element whose
  // B ~B is scalar to tolerance.
  explicit Blade(Multivector value, double tol = 1e-9);

  const Multivector& value() const { return value_; }
  int grade() const { return grade_; }
  const Algebra& algebra() const { return value_.algebra(); }
  Blade unit() const;
  Blade operator-() const;

 private:
  struct Checked {};
  Blade(Checked, Multivector value, int grade) : value_(std::move(value)), grade_(grade) {}
  Multivector value_;
  int grade_;
};

}  // namespace gcint
