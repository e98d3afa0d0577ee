#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "gcint/antiderivatives.hpp"
#include "gcint/boundary_method.hpp"
#include "gcint/calculus.hpp"
#include "gcint/errors.hpp"
#include "gcint/quadrature.hpp"

using namespace gcint;

namespace {

constexpr double kPi = std::numbers::pi;

ManifoldPatch unit_box(int m, int cells) {
  const Algebra alg(m);
  return ManifoldPatch(alg, m, [alg](std::span<const double> u) { return Multivector::vector(alg, u); }, +1, cells,
                       "box");
}

ImplicitManifold flat(Algebra alg) { return ImplicitManifold::flat(Blade(Multivector::pseudoscalar(alg))); }

VectorField one(Algebra alg) { return VectorField::constant(Multivector::scalar(alg, 1.0)); }

}  // namespace

TEST(DirectedIntegral, UnitSquareMeasure) {
  const ManifoldPatch sq = unit_box(2, 8);
  const DirectedIntegralResult r = directed_integral(sq, one(sq.ambient));
  EXPECT_LE((r.value - Multivector::pseudoscalar(sq.ambient)).norm(), 1e-12);
  EXPECT_EQ(r.cells, 64u);
  EXPECT_EQ(r.subdivision, 8);
}

TEST(DirectedIntegral, DiskArea) {
  for (double radius : {0.5, 1.0, 2.0}) {
    DiskParams p;
    p.radius = radius;
    const ManifoldPatch disk = disk_patch(p, 128);
    const DirectedIntegralResult r = directed_integral(disk, one(disk.ambient));
    EXPECT_NEAR(r.value[0b11], kPi * radius * radius, 1e-10);
    EXPECT_LE(r.value.off_grade_residual(2), 1e-12);
  }
}

TEST(DirectedIntegral, CircleOfPositionIsTwiceArea) {
  DiskParams p;
  p.radius = 1.5;
  const ManifoldPatch disk = disk_patch(p, 256);
  const auto faces = boundary_patches(disk);
  const ManifoldPatch& rim = faces.at(1);
  ASSERT_FALSE(rim.degenerate);
  const VectorField x(disk.ambient, [](const Multivector& v) { return v; });
  const Multivector v = directed_integral(rim, x).value;
  EXPECT_NEAR(v[0b11], 2.0 * kPi * 1.5 * 1.5, 1e-9);
  EXPECT_NEAR(v.scalar_part(), 0.0, 1e-9);
}

TEST(BoundaryPatches, DiskRimIsClockwiseForE12) {
  DiskParams p;
  const ManifoldPatch disk = disk_patch(p, 16);
  const auto faces = boundary_patches(disk);
  ASSERT_EQ(faces.size(), 4u);
  EXPECT_TRUE(faces[0].degenerate);   // centre
  EXPECT_FALSE(faces[1].degenerate);  // rim
  EXPECT_FALSE(faces[2].degenerate);  // seams
  // At x = e1 the rim measure points along -e2.
  const std::array<double, 1> start{0.0};
  const Multivector dx = faces[1].measure(start);
  EXPECT_LT(dx[0b10], 0.0);
  EXPECT_NEAR(std::abs(dx[0b10]), 2.0 * kPi, 1e-8);
  // The seam faces cancel.
  const Multivector seams =
      directed_integral(faces[2], one(disk.ambient)).value + directed_integral(faces[3], one(disk.ambient)).value;
  EXPECT_LE(seams.norm(), 1e-12);
}

TEST(BoundaryPatches, IntervalEndpointSigns) {
  const Algebra alg(2);
  const Multivector a = Multivector::vector(alg, std::vector<double>{1.0, 0.0});
  const Multivector b = Multivector::vector(alg, std::vector<double>{0.0, 2.0});
  const ManifoldPatch seg(alg, 1, [a, b](std::span<const double> u) { return a + (b - a) * u[0]; });
  const auto ends = boundary_patches(seg);
  ASSERT_EQ(ends.size(), 2u);
  EXPECT_EQ(ends[0].orientation, -1);
  EXPECT_EQ(ends[1].orientation, +1);
  EXPECT_EQ(ends[0].point({}), a);
  EXPECT_EQ(ends[1].point({}), b);
  const VectorField id(alg, [](const Multivector& x) { return x; });
  EXPECT_LE((directed_integral(ends[0], id).value + directed_integral(ends[1], id).value - (b - a)).norm(), 1e-15);
}

TEST(BoundaryPatches, OrientationRuleOnBoxes) {
  for (int m : {2, 3}) {
    const ManifoldPatch box = unit_box(m, 4);
    const Multivector I = Multivector::pseudoscalar(box.ambient);
    const auto faces = boundary_patches(box);
    ASSERT_EQ(faces.size(), static_cast<std::size_t>(2 * m));
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const int k = static_cast<int>(f / 2);
      const double outward = (f % 2 == 0) ? -1.0 : 1.0;
      const Multivector n = Multivector::basis_vector(box.ambient, k) * outward;
      const std::array<double, 2> v{0.3, 0.6};
      const Multivector dm = faces[f].measure(std::span<const double>(v.data(), static_cast<std::size_t>(m - 1)));
      EXPECT_LE((dm * n - I * dm.norm()).norm(), 1e-8) << "m=" << m << " face " << f;
    }
  }
}

TEST(BoundaryPatches, ClosedBoundaryNullIntegral) {
  for (int m : {2, 3}) {
    const ManifoldPatch box = unit_box(m, 8);
    Multivector sum(box.ambient);
    for (const auto& face : boundary_patches(box)) sum += directed_integral(face, one(box.ambient)).value;
    EXPECT_LE(sum.norm(), 1e-12);
  }
  CylinderParams cp;
  cp.radius = 1.3;
  cp.height = 0.7;
  const ManifoldPatch cyl = cylinder_patch(cp, 16);
  Multivector sum(cyl.ambient);
  for (const auto& face : boundary_patches(cyl)) {
    if (!face.degenerate) sum += directed_integral(face, one(cyl.ambient)).value;
  }
  EXPECT_LE(sum.norm(), 1e-10);
}

TEST(DirectedIntegral, DegenerateNodeThrowsUnlessFlagged) {
  const Algebra alg(2);
  ManifoldPatch collapsed(alg, 2, [alg](std::span<const double> u) {
    return Multivector::vector(alg, std::vector<double>{u[0], 0.0});
  });
  EXPECT_THROW(directed_integral(collapsed, one(alg)), DegenerateMeasure);
  collapsed.degenerate = true;
  EXPECT_TRUE(directed_integral(collapsed, one(alg)).value.is_zero());
  EXPECT_THROW(ManifoldPatch(alg, 3, collapsed.chart), std::invalid_argument);
  EXPECT_THROW(ManifoldPatch(alg, 2, collapsed.chart, 0), std::invalid_argument);
}

TEST(DirectedIntegral, MidpointRefinementIsSecondOrder) {
  const ManifoldPatch base = unit_box(2, 1);
  const VectorField f(base.ambient, [](const Multivector& x) {
    return Multivector::scalar(x.algebra(), std::exp(x[0b01] + x[0b10]));
  });
  const double exact = (std::numbers::e - 1.0) * (std::numbers::e - 1.0);
  std::vector<double> steps, errors;
  for (int n : {4, 8, 16, 32}) {
    ManifoldPatch p = base;
    p.subdivision = n;
    steps.push_back(1.0 / n);
    errors.push_back(std::abs(directed_integral(p, f).value[0b11] - exact));
  }
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double slope = std::log(errors[i - 1] / errors[i]) / std::log(2.0);
    EXPECT_NEAR(slope, 2.0, 0.1);
  }
}

TEST(DirectedIntegral, ToleranceDrivenRefinement) {
  const ManifoldPatch base = unit_box(2, 4);
  const VectorField f(base.ambient, [](const Multivector& x) {
    return Multivector::scalar(x.algebra(), std::exp(x[0b01] + x[0b10]));
  });
  QuadratureOptions q;
  q.tolerance = 1e-5;
  q.max_subdivision = 1024;
  const DirectedIntegralResult r = directed_integral(base, f, q);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.estimated_error, 1e-5);
  EXPECT_GT(r.subdivision, 4);
  q.max_subdivision = 8;
  q.tolerance = 1e-12;
  EXPECT_FALSE(directed_integral(base, f, q).converged);
}

TEST(DirectedIntegral, DeterministicAcrossWorkerCounts) {
  DiskParams p;
  p.radius = 1.25;
  const ManifoldPatch disk = disk_patch(p, 300);
  const VectorField x(disk.ambient, [](const Multivector& v) { return v; });
  QuadratureOptions one_worker, four_workers;
  one_worker.threads = 1;
  four_workers.threads = 4;
  EXPECT_EQ(directed_integral(disk, x, one_worker).value, directed_integral(disk, x, four_workers).value);
}

TEST(FundamentalTheorem, HalfXSquaredOnUnitSquare) {
  const ManifoldPatch sq = unit_box(2, 256);
  const FundamentalTheoremCheck c =
      verify_fundamental_theorem(sq, table_entry("x", 2).antiderivative, flat(sq.ambient));
  EXPECT_LT(c.residual, 1e-6);
  // ∂(½x²) = x: both sides equal ∫ d²x x over the square.
  EXPECT_NEAR(c.interior[0b01], 0.5, 1e-9);
  EXPECT_NEAR(c.interior[0b10], -0.5, 1e-9);
}

TEST(FundamentalTheorem, PositionFieldOnDisk) {
  DiskParams p;
  p.radius = 0.8;
  const ManifoldPatch disk = disk_patch(p, 256);
  const VectorField x(disk.ambient, [](const Multivector& v) { return v; });
  const FundamentalTheoremCheck c = verify_fundamental_theorem(disk, x, flat(disk.ambient));
  EXPECT_LT(c.residual, 1e-6);
  EXPECT_NEAR(c.interior[0b11], 2.0 * kPi * 0.64, 1e-8);
  EXPECT_NEAR(c.boundary[0b11], 2.0 * kPi * 0.64, 1e-8);
}

TEST(FundamentalTheorem, ConstantFieldGivesZeroBothSides) {
  const ManifoldPatch cube = unit_box(3, 16);
  const Multivector c = Multivector::basis_blade(cube.ambient, 0b101, 2.5) + 1.0;
  const FundamentalTheoremCheck r = verify_fundamental_theorem(cube, VectorField::constant(c), flat(cube.ambient));
  EXPECT_LE(r.interior.norm(), 1e-9);
  EXPECT_LE(r.boundary.norm(), 1e-12);
}

TEST(FundamentalTheorem, AxRowOnUnitCube) {
  const ManifoldPatch cube = unit_box(3, 32);
  const FundamentalTheoremCheck c =
      verify_fundamental_theorem(cube, table_entry("ax", 3).antiderivative, flat(cube.ambient));
  EXPECT_LT(c.residual, 1e-6);
}

TEST(WorkerCount, RespectsRequestAndFloor) {
  EXPECT_GE(worker_count(), 1);
  EXPECT_EQ(worker_count(1), 1);
  EXPECT_LE(worker_count(64), 64);
}
