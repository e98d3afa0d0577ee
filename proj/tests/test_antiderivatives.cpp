#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gcint/antiderivatives.hpp"
#include "gcint/axioms.hpp"
#include "gcint/errors.hpp"

using namespace gcint;

namespace {

constexpr double kPi = std::numbers::pi;

Multivector vec(Algebra a, std::vector<double> c) { return Multivector::vector(a, c); }

}  // namespace

TEST(TableEntries, AllRowsPassInLowDimensions) {
  for (int d = 2; d <= 4; ++d) {
    for (const std::string& name : table_names()) {
      const DerivativeCheck c = check_entry(table_entry(name, d));
      EXPECT_TRUE(c.passed) << name << " d=" << d << " residual " << c.max_residual;
      EXPECT_EQ(c.points, 100u);
      EXPECT_LE(c.max_residual, 1e-6);
    }
  }
}

TEST(TableEntries, HighDimensions) {
  for (int d : {6, 8}) {
    for (const std::string& name : table_names()) {
      CheckOptions o;
      o.points = 20;
      EXPECT_TRUE(check_entry(table_entry(name, d), o).passed) << name << " d=" << d;
    }
  }
}

TEST(TableEntries, ConstRowIsXOverD) {
  const AntiderivativeEntry e = table_entry("const", 3);
  const Multivector x = vec(Algebra(3), {0.3, -1.2, 0.7});
  EXPECT_EQ(e.antiderivative(x), x / 3.0);
  EXPECT_EQ(e.integrand(x), Multivector::scalar(Algebra(3), 1.0));
}

TEST(TableEntries, XRowIsHalfXSquared) {
  const AntiderivativeEntry e = table_entry("x", 2);
  const Multivector x = vec(Algebra(2), {0.3, -1.2});
  EXPECT_NEAR(e.antiderivative(x).scalar_part(), 0.5 * (0.09 + 1.44), 1e-15);
  EXPECT_LE(e.antiderivative(x).off_grade_residual(0), 0.0);
}

TEST(TableEntries, RadialWithUnitProfileMatchesConstRow) {
  TableOptions o;
  o.radial = [](double) { return 1.0; };
  const AntiderivativeEntry radial = table_entry("radial", 3, o);
  const AntiderivativeEntry constant = table_entry("const", 3);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const Multivector x = random_vector(Algebra(3), rng) * 2.0;
    if (x.norm() < 1e-3) continue;
    EXPECT_LE((radial.antiderivative(x) - constant.antiderivative(x)).norm(), 1e-13);
  }
  // A supplied closed-form primitive replaces the quadrature.
  o.radial_primitive = [](double rho) { return rho * rho * rho / 3.0; };
  const Multivector x = vec(Algebra(3), {0.5, 0.5, 0.5});
  EXPECT_LE((table_entry("radial", 3, o).antiderivative(x) - x / 3.0).norm(), 1e-15);
}

TEST(TableEntries, AxRowRecoversBivectorPart) {
  const Algebra alg(2);
  TableOptions o;
  o.a = vec(alg, {0.0, 1.0});
  const AntiderivativeEntry e = table_entry("ax", 2, o);
  const Multivector x = vec(alg, {0.8, 0.3});
  DerivativeOptions d4;
  d4.order = 4;
  const Multivector got = vector_derivative(e.antiderivative, e.manifold, x, d4);
  // a x = a·x + a∧x = 0.3 - 0.8 e12
  EXPECT_NEAR(got.scalar_part(), 0.3, 1e-9);
  EXPECT_NEAR(got[0b11], -0.8, 1e-9);
  EXPECT_TRUE(check_entry(e).passed);
}

TEST(TableEntries, Errors) {
  EXPECT_THROW(table_entry("cubic", 3), std::invalid_argument);
  EXPECT_THROW(table_entry("x", 1), std::invalid_argument);
  EXPECT_THROW(table_entry("x", 9), std::invalid_argument);
  TableOptions o;
  o.a = vec(Algebra(3), {1, 0, 0});
  EXPECT_THROW(table_entry("ax", 2, o), std::invalid_argument);
  TableOptions bad;
  bad.radial = [](double s) { return std::pow(s, -3.0); };  // s^2 f(s) = 1/s
  EXPECT_THROW(table_entry("radial", 3, bad), DomainError);
}

TEST(TableEntries, GaugeConstantLeavesResidualsUnchanged) {
  std::mt19937_64 rng(99);
  for (int d = 2; d <= 4; ++d) {
    for (const std::string& name : table_names()) {
      const AntiderivativeEntry e = table_entry(name, d);
      CheckOptions plain;
      CheckOptions shifted;
      shifted.gauge = random_multivector(Algebra(d), rng);
      const DerivativeCheck a = check_entry(e, plain);
      const DerivativeCheck b = check_entry(e, shifted);
      EXPECT_NEAR(a.max_residual, b.max_residual, 1e-12) << name << " d=" << d;
      EXPECT_EQ(a.passed, b.passed);
    }
  }
}

TEST(ScenarioEntries, AllPass) {
  for (const std::string& name : scenario_names()) {
    const Algebra alg(name == "circle" ? 2 : 3);
    ScenarioParams p;
    p.radius = 1.3;
    p.height = 0.8;
    p.cap_height = name == "cylinder-cap" ? 0.8 : 0.0;
    const DerivativeCheck c = check_entry(scenario_entry(name, alg, p));
    EXPECT_TRUE(c.passed) << name << " residual " << c.max_residual;
    EXPECT_EQ(c.points, 100u);
  }
}

TEST(ScenarioEntries, EmbeddedInHigherDimensions) {
  ScenarioParams p;
  p.plane = Multivector::basis_blade(Algebra(5), 0b10100);
  p.reference = Multivector::basis_vector(Algebra(5), 2);
  EXPECT_TRUE(check_entry(scenario_entry("circle", Algebra(5), p)).passed);
  ScenarioParams q;
  q.plane = Multivector::basis_blade(Algebra(4), 0b0110);
  q.volume = Multivector::basis_blade(Algebra(4), 0b1110);
  q.reference = Multivector::basis_vector(Algebra(4), 1);
  EXPECT_TRUE(check_entry(scenario_entry("cylinder-side", Algebra(4), q)).passed);
  q.cap_height = 0.5;
  EXPECT_TRUE(check_entry(scenario_entry("cylinder-cap", Algebra(4), q)).passed);
}

TEST(ScenarioEntries, CircleAtAnglePi) {
  const Algebra alg(2);
  for (double r : {0.5, 1.0, 2.0}) {
    ScenarioParams p;
    p.radius = r;
    const AntiderivativeEntry e = scenario_entry("circle", alg, p);
    const Multivector x = e.branch->reference * (-r / e.branch->reference.norm());
    const Multivector F = e.antiderivative(x);
    EXPECT_NEAR(F[0b11], -0.5 * r * r * kPi, 1e-13);
    EXPECT_NEAR(F.scalar_part(), 0.5 * r * r * std::log(r), 1e-13);
  }
}

TEST(ScenarioEntries, CircleBranchMetadata) {
  const AntiderivativeEntry e = scenario_entry("circle", Algebra(2));
  ASSERT_TRUE(e.branch.has_value());
  EXPECT_DOUBLE_EQ(e.branch->branch_start, -2.0 * kPi);
  EXPECT_TRUE(e.branch->near_cut(e.branch->reference));
  EXPECT_FALSE(e.branch->near_cut(-e.branch->reference));
  // Just below angle 0 the log sits near -2π, just above near 0.
  const Multivector below = vec(Algebra(2), {std::cos(-1e-9), std::sin(-1e-9)});
  const Multivector above = vec(Algebra(2), {std::cos(1e-9), std::sin(1e-9)});
  EXPECT_NEAR((e.antiderivative(below) - e.antiderivative(above))[0b11], -kPi, 1e-8);
}

TEST(ScenarioEntries, SideOrderMatters) {
  ScenarioParams p;
  p.radius = 1.2;
  p.height = 1.0;
  const Algebra alg(3);
  AntiderivativeEntry e = scenario_entry("cylinder-side", alg, p);
  ASSERT_TRUE(check_entry(e).passed);
  const CylinderFrame frame(Multivector::basis_blade(alg, 0b011), Multivector::basis_blade(alg, 0b111));
  // The written-out order x r_w(x) has ∂ = 3 t a - p, not x.
  e.antiderivative = VectorField(alg, [frame](const Multivector& x) { return x * frame.rejection(x); });
  const DerivativeCheck wrong = check_entry(e);
  EXPECT_FALSE(wrong.passed);
  const Multivector x = frame.point(vec(alg, {1, 0, 0}), 1.2, 0.7, 0.4);
  DerivativeOptions d4;
  d4.order = 4;
  const Multivector residual = vector_derivative(e.antiderivative, e.manifold, x, d4) - x;
  const Multivector expected = frame.axis * (2.0 * 0.4) - frame.in_plane(x) * 2.0;
  EXPECT_LE((residual - expected).norm(), 1e-8);
}

TEST(ScenarioEntries, CapAtZeroHeightIsHalfPSquared) {
  ScenarioParams p;
  p.radius = 1.0;
  p.cap_height = 0.0;
  const Algebra alg(3);
  const AntiderivativeEntry e = scenario_entry("cylinder-cap", alg, p);
  const Multivector x = vec(alg, {0.3, -0.4, 0.0});
  EXPECT_LE((e.antiderivative(x) - Multivector::scalar(alg, 0.125)).norm(), 1e-15);
}

TEST(ScenarioEntries, CylinderFrameQuantities) {
  const Algebra alg(3);
  const CylinderFrame frame(Multivector::basis_blade(alg, 0b011), Multivector::basis_blade(alg, 0b111));
  // ω I3 = e12 e123 = -e3, so height grows towards -e3.
  EXPECT_LE((frame.axis - vec(alg, {0, 0, -1})).norm(), 1e-15);
  const Multivector x = vec(alg, {0.6, 0.8, -1.5});
  EXPECT_NEAR(frame.radius_squared(x), 1.0, 1e-15);
  EXPECT_NEAR(frame.height(x), 1.5, 1e-15);
  EXPECT_LE((frame.in_plane(x) - vec(alg, {0.6, 0.8, 0.0})).norm(), 1e-15);
  EXPECT_LE((frame.point(vec(alg, {1, 0, 0}), 1.0, std::atan2(0.8, 0.6), 1.5) - x).norm(), 1e-15);
  EXPECT_THROW(CylinderFrame(Multivector::basis_blade(alg, 0b011, 2.0), Multivector::basis_blade(alg, 0b111)),
               std::invalid_argument);
  const Algebra a4(4);
  EXPECT_THROW(CylinderFrame(Multivector::basis_blade(a4, 0b1001), Multivector::basis_blade(a4, 0b0111)),
               std::invalid_argument);
}

TEST(ScenarioEntries, Errors) {
  EXPECT_THROW(scenario_entry("torus", Algebra(3)), std::invalid_argument);
  EXPECT_THROW(scenario_entry("cylinder-side", Algebra(2)), std::invalid_argument);
  ScenarioParams p;
  p.radius = -1.0;
  EXPECT_THROW(scenario_entry("circle", Algebra(2), p), std::invalid_argument);
}

TEST(QuasiRandom, InUnitBoxAndDeterministic) {
  for (std::uint64_t i = 1; i < 200; ++i) {
    const auto u = quasi_random_point(3, i);
    ASSERT_EQ(u.size(), 3u);
    for (double v : u) {
      EXPECT_GE(v, 0.0);
      EXPECT_LT(v, 1.0);
    }
    EXPECT_EQ(u, quasi_random_point(3, i));
  }
}
