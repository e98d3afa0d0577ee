#pragma once

// Closed-form antiderivatives F with ∂_M F = f: the flat-space table and
// the circle / cylinder entries used by the worked integration chains.
// Every entry carries its own derivative check.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcint/algebra.hpp"
#include "gcint/calculus.hpp"
#include "gcint/quadrature.hpp"

namespace gcint {

// Branch bookkeeping for entries built on log_spinor.
struct BranchInfo {
  Multivector plane;      // unit bivector acting as the imaginary unit
  Multivector reference;  // x0 of log(x x0)
  double branch_start;    // angle interval (branch_start, branch_start + 2 pi]
  std::string cut;        // human-readable cut locus
  // Points whose derivative stencil may straddle the cut.
  PointPredicate near_cut;
};

struct AntiderivativeEntry {
  std::string name;
  std::string formula;        // "F(x) = ..." for docs and the catalog
  std::string manifold_name;  // "R^d", "circle", ...
  ImplicitManifold manifold;
  VectorField integrand;       // f
  VectorField antiderivative;  // F
  // Chart from [0,1]^manifold.dim onto sample points used by the check.
  Chart sampler;
  std::optional<BranchInfo> branch;
};

struct TableOptions {
  // Constant vector of the "ax" row; defaults to a fixed unit vector.
  std::optional<Multivector> a;
  // Radial profile f(s) of the "radial" row, default 1 / (1 + s^2).
  std::function<double(double)> radial;
  // Optional closed form of G(rho) = ∫_0^rho s^{d-1} f(s) ds; adaptive
  // Gauss-Kronrod quadrature is used when absent.
  std::function<double(double)> radial_primitive;
};

// Rows: "const", "x", "xhat", "ax", "radial". Throws std::invalid_argument
// for an unknown name or dimension outside [2, 8], DomainError when the
// radial profile is not integrable at the probe radii.
AntiderivativeEntry table_entry(std::string_view name, int d, const TableOptions& options = {});
std::vector<std::string> table_names();

// Frame of a right circular cylinder: rejection/projection against the
// plane ω and the height taken along ω I3.
struct CylinderFrame {
  CylinderFrame(Multivector omega, Multivector volume);

  Multivector omega;
  Multivector omega_inv;
  Multivector volume;  // I3
  Multivector axis;    // ω I3, the direction in which height grows

  Multivector in_plane(const Multivector& x) const;   // p_ω(x)
  Multivector rejection(const Multivector& x) const;  // r_ω(x) = ω^{-1}(ω ∧ x)
  double radius_squared(const Multivector& x) const;  // (ω ⌊ x)^2
  double height(const Multivector& x) const;          // (ω^{-1}(ω ∧ x)) ⌊ (ω I3)
  // Cylinder point at in-plane angle theta measured from `x0` towards ω's sense.
  Multivector point(const Multivector& x0_unit, double rho, double theta, double height) const;
};

struct ScenarioParams {
  double radius = 1.0;
  double height = 1.0;
  // Circle: plane and reference vector (in the plane). Cylinder: ω and I3.
  std::optional<Multivector> plane;
  std::optional<Multivector> reference;
  std::optional<Multivector> volume;
  double branch_start = kDefaultBranchStart;
  // Cap entries: height of the cap plane.
  double cap_height = 0.0;
};

// "circle": f = x/2, F = ½ x² log(x x0) on the circle of the given radius;
// "cylinder-side": f = x, F = r_ω(x) x on the side wall;
// "cylinder-cap": f = x, F = ½ p_ω(x)² + ½ p_ω(x) r_ω(x) on a cap plane.
AntiderivativeEntry scenario_entry(std::string_view name, Algebra algebra, const ScenarioParams& params = {});
std::vector<std::string> scenario_names();

// ½ p² log(p x0) for p in the plane of log_spinor.
Multivector circle_log_primitive(const Multivector& p, const Multivector& x0, const Multivector& plane,
                                 double branch_start = kDefaultBranchStart);

struct DerivativeCheck {
  double max_residual = 0.0;  // max ||∂F - f|| / max(1, ||f||)
  std::size_t points = 0;
  std::size_t skipped = 0;    // near the cut locus
  bool passed = false;
};

struct CheckOptions {
  std::size_t points = 100;
  double tolerance = 1e-6;
  // Offsets the quasi-random sequence.
  std::uint64_t seed = 0;
  // Constant added to F (gauge freedom); must leave residuals unchanged.
  std::optional<Multivector> gauge;
};

DerivativeCheck check_entry(const AntiderivativeEntry& entry, const CheckOptions& options = {});

// Quasi-random point of [0,1]^dim (Sobol sequence, index >= 1).
std::vector<double> quasi_random_point(int dim, std::uint64_t index);

}  // namespace gcint
