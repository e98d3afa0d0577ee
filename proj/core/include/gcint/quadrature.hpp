#pragma once

// Brute-force directed integration over parameterized patches:
//   ∫ d^m x f(x) ≈ sum_cells [∂_1 y ∧ ... ∧ ∂_m y](u_c) Δu f(y(u_c))
// with the measure multiplying the integrand from the left.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gcint/algebra.hpp"
#include "gcint/calculus.hpp"

namespace gcint {

using Chart = std::function<Multivector(std::span<const double>)>;

// Smooth map from the parameter box [0,1]^dim into the ambient space.
struct ManifoldPatch {
  ManifoldPatch(Algebra ambient, int dim, Chart chart, int orientation = +1, int subdivision = 16,
                std::string name = {});

  Algebra ambient;
  int dim;
  Chart chart;
  int orientation;   // +1 or -1, multiplies the natural parameter measure
  int subdivision;   // cells per axis
  std::string name;
  // Faces whose measure vanishes at every node (polar centre, collapsed
  // edges) contribute zero instead of raising DegenerateMeasure.
  bool degenerate = false;

  Multivector point(std::span<const double> u) const { return chart(u); }
  // Oriented, unscaled measure ∂_1 y ∧ ... ∧ ∂_m y at u (scalar orientation for m = 0).
  Multivector measure(std::span<const double> u) const;
};

struct QuadratureOptions {
  // Refine by doubling until successive values differ by less than this.
  // Zero means a single evaluation at the patch's own subdivision.
  double tolerance = 0.0;
  int max_subdivision = 0;  // 0: no cap beyond the starting subdivision
  // Worker cap; 0 reads GCINT_THREADS (default: hardware concurrency).
  int threads = 0;
};

struct DirectedIntegralResult {
  Multivector value;
  std::size_t cells = 0;
  int subdivision = 0;
  // ||I(n) - I(n/2)||, the difference between the last two refinements.
  double estimated_error = 0.0;
  bool converged = true;
};

// Cell threshold below which a node's measure counts as degenerate.
inline constexpr double kDegenerateMeasure = 1e-12;

DirectedIntegralResult directed_integral(const ManifoldPatch& patch, const VectorField& f,
                                         const QuadratureOptions& options = {});

// The 2m faces of the parameter box, each oriented so that its measure
// times the outward normal reproduces the patch's own orientation. For
// m = 1 these are the end points with signs +1 (u = 1) and -1 (u = 0).
std::vector<ManifoldPatch> boundary_patches(const ManifoldPatch& patch);

struct FundamentalTheoremCheck {
  Multivector interior;  // ∫ d^m x ∂F
  Multivector boundary;  // sum over faces of ∫ d^{m-1} x F
  double residual = 0.0;
  std::size_t cells = 0;
};

// Both sides of ∫_M d^m x ∂F = ∫_∂M d^{m-1} x F at the patch's
// subdivision. ∂F is the projected vector derivative on `manifold`.
FundamentalTheoremCheck verify_fundamental_theorem(const ManifoldPatch& patch, const VectorField& field,
                                                   const ImplicitManifold& manifold,
                                                   const QuadratureOptions& options = {});

// Worker count from GCINT_THREADS, capped to [1, hardware concurrency].
int worker_count(int requested = 0);

}  // namespace gcint
