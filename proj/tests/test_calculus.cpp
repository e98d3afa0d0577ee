#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gcint/algebra.hpp"
#include "gcint/antiderivatives.hpp"
#include "gcint/axioms.hpp"
#include "gcint/calculus.hpp"
#include "gcint/errors.hpp"
#include "oracles.hpp"

using namespace gcint;
using gcint::testing::gram_schmidt_projection;
using gcint::testing::vector_coeffs;

namespace {

Multivector vec(Algebra a, std::vector<double> c) { return Multivector::vector(a, c); }

}  // namespace

TEST(Projection, Examples) {
  const Algebra a(3);
  const Blade e12(Multivector::basis_blade(a, 0b011));
  const Multivector e1 = vec(a, {1, 0, 0});
  EXPECT_EQ(project(e12, e1), e1);
  const Multivector v = vec(a, {1, 0, 2});
  EXPECT_LE((reject(e12, v) - vec(a, {0, 0, 2})).norm(), 1e-15);
  const auto gs = gram_schmidt_projection({{1, 0, 0}, {0, 1, 0}}, {1, 0, 2});
  EXPECT_LE((project(e12, v) - vec(a, gs)).norm(), 1e-15);
}

TEST(Projection, MatchesGramSchmidtOnRandomBlades) {
  std::mt19937_64 rng(8);
  for (int d = 3; d <= 6; ++d) {
    const Algebra alg(d);
    for (int k = 1; k < d; ++k) {
      for (int t = 0; t < 20; ++t) {
        std::vector<Multivector> factors;
        std::vector<std::vector<double>> spans;
        Multivector b = Multivector::scalar(alg, 1.0);
        for (int j = 0; j < k; ++j) {
          factors.push_back(random_vector(alg, rng));
          spans.push_back(vector_coeffs(factors.back()));
          b = outer_product(b, factors.back());
        }
        if (b.norm() < 0.05) continue;
        const Blade blade(b);
        const Multivector a = random_vector(alg, rng);
        const auto expected = gram_schmidt_projection(spans, vector_coeffs(a));
        const Multivector p = project(blade, a);
        EXPECT_LE((p - vec(alg, expected)).norm(), 1e-10) << "d=" << d << " k=" << k;
        // Split identity, idempotence, containment, orthogonality.
        EXPECT_LE((p + reject(blade, a) - a).norm(), 1e-12);
        EXPECT_LE((project(blade, p) - p).norm(), 1e-12);
        EXPECT_LE(outer_product(p, b).norm(), 1e-10);
        EXPECT_LE(project(blade, reject(blade, a)).norm(), 1e-10);
      }
    }
  }
}

TEST(VectorDerivative, DivergenceOfPositionIsDimension) {
  for (int d = 2; d <= 8; ++d) {
    const Algebra alg(d);
    const auto flat = ImplicitManifold::flat(Blade(Multivector::pseudoscalar(alg)));
    const VectorField id(alg, [](const Multivector& x) { return x; });
    std::mt19937_64 rng(static_cast<unsigned>(d));
    const Multivector x = random_vector(alg, rng);
    const Multivector dx = vector_derivative(id, flat, x);
    EXPECT_NEAR(dx.scalar_part(), d, 1e-8);
    EXPECT_LE((dx - Multivector::scalar(alg, d)).norm(), 1e-8);
  }
}

TEST(VectorDerivative, SecondOrderStepHalving) {
  const Algebra alg(2);
  const auto flat = ImplicitManifold::flat(Blade(Multivector::pseudoscalar(alg)));
  const Multivector e1 = Multivector::basis_vector(alg, 0);
  // f = e1 exp(x1), ∂f = exp(x1).
  const VectorField f(alg, [e1](const Multivector& x) { return e1 * std::exp(x[0b01]); });
  const Multivector x = vec(alg, {0.3, -0.2});
  const double exact = std::exp(0.3);
  auto err = [&](double h) {
    DerivativeOptions o;
    o.step = h;
    return std::abs(vector_derivative(f, flat, x, o).scalar_part() - exact);
  };
  const double ratio = err(2e-2) / err(1e-2);
  EXPECT_GE(ratio, 3.5);
  EXPECT_LE(ratio, 4.5);
  DerivativeOptions o4;
  o4.order = 4;
  o4.step = 2e-2;
  EXPECT_LT(std::abs(vector_derivative(f, flat, x, o4).scalar_part() - exact), err(2e-2) * 1e-2);
}

TEST(VectorDerivative, BivectorPartOfAx) {
  const Algebra alg(2);
  const auto flat = ImplicitManifold::flat(Blade(Multivector::pseudoscalar(alg)));
  const Multivector a = vec(alg, {0.6, 0.8});
  // ∂(x a) = d a, and ∂(a x) = (2 - d) a: checks that the derivative acts from the left.
  const VectorField xa(alg, [a](const Multivector& x) { return x * a; });
  const VectorField ax(alg, [a](const Multivector& x) { return a * x; });
  const Multivector x = vec(alg, {0.4, 1.1});
  EXPECT_LE((vector_derivative(xa, flat, x) - a * 2.0).norm(), 1e-8);
  EXPECT_LE(vector_derivative(ax, flat, x).norm(), 1e-8);
}

TEST(VectorDerivative, CircleLogDerivativeIsInverse) {
  const Algebra alg(2);
  ScenarioParams p;
  p.radius = 1.7;
  const AntiderivativeEntry circle = scenario_entry("circle", alg, p);
  const Multivector x0 = circle.branch->reference;
  const Multivector plane = circle.branch->plane;
  const VectorField logx(alg, [&](const Multivector& x) { return log_spinor(x * x0, plane); });
  for (int k = 1; k < 12; ++k) {
    const double th = -2.0 * std::numbers::pi * k / 12.0;
    const Multivector x = vec(alg, {1.7 * std::cos(th), 1.7 * std::sin(th)});
    if (!circle.manifold.contains(x)) continue;
    const Multivector d = vector_derivative(logx, circle.manifold, x);
    EXPECT_LE((d - inverse(x)).norm(), 1e-8) << "theta=" << th;
  }
}

TEST(VectorDerivative, Preconditions) {
  const Algebra alg(2);
  ScenarioParams p;
  const AntiderivativeEntry circle = scenario_entry("circle", alg, p);
  const VectorField id(alg, [](const Multivector& x) { return x; });
  EXPECT_THROW(vector_derivative(id, circle.manifold, vec(alg, {2.0, 0.0})), DomainError);
  const auto flat = ImplicitManifold::flat(Blade(Multivector::pseudoscalar(alg)));
  DerivativeOptions bad;
  bad.step = 0.0;
  EXPECT_THROW(vector_derivative(id, flat, vec(alg, {1.0, 0.0}), bad), StepUnderflow);
  bad.step = 1e-300;
  EXPECT_THROW(vector_derivative(id, flat, vec(alg, {1.0, 0.0}), bad), StepUnderflow);
  const VectorField id3(Algebra(3), [](const Multivector& x) { return x; });
  EXPECT_THROW(vector_derivative(id3, flat, vec(alg, {1.0, 0.0})), AlgebraMismatch);
}

TEST(ConstraintPseudoscalar, SphereTangentPlane) {
  const Algebra alg(3);
  const Blade I3(Multivector::pseudoscalar(alg));
  const ScalarFunction sphere = [](const Multivector& x) { return x.norm_squared() - 1.0; };
  const Blade t = constraint_pseudoscalar(sphere, vec(alg, {0, 0, 1}), I3);
  EXPECT_EQ(t.grade(), 2);
  EXPECT_LE((t.value() - Multivector::basis_blade(alg, 0b011)).norm(), 1e-9);
  const ScalarFunction flat_m = [](const Multivector&) { return 0.0; };
  EXPECT_THROW(constraint_pseudoscalar(flat_m, vec(alg, {0, 0, 1}), I3), DomainError);
}

TEST(Differential, ScalingMap) {
  const Algebra alg(3);
  const LinearMap L = differential([](const Multivector& x) { return x * 2.0; }, vec(alg, {0.1, 0.2, 0.3}));
  const Multivector B = Multivector::basis_blade(alg, 0b011) + Multivector::basis_blade(alg, 0b110, -0.5);
  EXPECT_LE((L(B) - B * 4.0).norm(), 1e-8);
  EXPECT_NEAR(L.determinant(), 8.0, 1e-8);
  const LinearMap Linv = L.inverse();
  EXPECT_LE((Linv(L(B)) - B).norm(), 1e-8);
}

TEST(Differential, OutermorphismIsMultiplicative) {
  std::mt19937_64 rng(13);
  for (int d = 2; d <= 5; ++d) {
    const Algebra alg(d);
    std::vector<Multivector> images;
    for (int i = 0; i < d; ++i) images.push_back(random_vector(alg, rng));
    const LinearMap L(images);
    for (int t = 0; t < 20; ++t) {
      const Multivector a = random_multivector(alg, rng);
      const Multivector b = random_multivector(alg, rng);
      EXPECT_LE((L(outer_product(a, b)) - outer_product(L(a), L(b))).norm(), 1e-11);
    }
    // det L = <L(I) I^{-1}>_0 equals the matrix determinant under the outermorphism.
    const Multivector I = Multivector::pseudoscalar(alg);
    EXPECT_LE((L(I) - I * L.determinant()).norm(), 1e-11);
  }
}

TEST(Differential, SingularInverseAndMismatch) {
  const Algebra alg(2);
  const LinearMap P({vec(alg, {1, 0}), vec(alg, {0, 0})});
  EXPECT_DOUBLE_EQ(P.determinant(), 0.0);
  EXPECT_THROW(P.inverse(), NotInvertible);
  EXPECT_THROW(LinearMap({vec(alg, {1, 0})}), std::invalid_argument);
  EXPECT_THROW(LinearMap::identity(alg)(vec(Algebra(3), {1, 0, 0})), AlgebraMismatch);
}

TEST(Differential, CircleLineMapPushforward) {
  // y = log(x x0) x0 takes the unit circle tangent at x0 to a unit vector.
  const Algebra alg(2);
  const Multivector x0 = vec(alg, {1, 0});
  const Multivector I = Multivector::basis_blade(alg, 0b11);
  const Multivector x = vec(alg, {std::cos(-1.0), std::sin(-1.0)});
  const PointFunction y = [&](const Multivector& q) {
    const Multivector p = q / q.norm();  // extend off the circle radially
    return log_spinor(p * x0, I) * x0;
  };
  const LinearMap L = differential(y, x);
  const Multivector tangent = vec(alg, {-std::sin(-1.0), std::cos(-1.0)});
  const Multivector dy = L(tangent);
  EXPECT_NEAR(dy.norm(), 1.0, 1e-8);
  EXPECT_LE(dy.off_grade_residual(1), 1e-12);
}
