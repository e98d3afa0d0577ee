#pragma once

// Integration by repeated antiderivatives: apply the fundamental theorem
// down a chain of nested manifolds N_m ⊃ ... ⊃ N_0, cutting incisions
// wherever a level has no boundary (or crosses a branch cut), and finish by
// evaluating the last antiderivative at the signed points of N_0:
//
//   || ∫_M d^m x f - sum_i s_i F_m(x_i) || <= max_i sup_{E_i} ||F_{m-i}|| sum_i vol(E_i)

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gcint/algebra.hpp"
#include "gcint/antiderivatives.hpp"
#include "gcint/calculus.hpp"
#include "gcint/quadrature.hpp"

namespace gcint {

inline constexpr double kSupSafetyFactor = 1.1;

// A bounded region cut out of one level of the chain.
struct Incision {
  std::string name;
  int level = 0;  // dimension of the manifold it is cut from
  PointPredicate contains;
  double volume = 0.0;
  // Chart over the region used to sample the sup; unnecessary with exact_sup.
  std::optional<ManifoldPatch> region;
  // The function integrated over that level, ∂^{-m+level} f.
  std::optional<VectorField> field;
  // Closed-form sup of ||field|| over the region, when known.
  std::optional<double> exact_sup;
};

struct Lemma1Bound {
  double bound = 0.0;  // vol(E) * sup * safety factor
  double sup = 0.0;
  bool estimate = false;  // sup came from sampling
  std::size_t samples = 0;
};

// vol(E) sup_E ||f|| x 1.1. The sup is exact when the incision carries one,
// otherwise sampled on a grid of the region chart (samples_per_axis, or a
// default of 1024 / 96 / 24 nodes for 1-, 2-, 3-dimensional regions).
// Throws BoundUnavailable on non-finite samples or a missing region chart.
Lemma1Bound lemma1_bound(const Incision& incision, const VectorField& f, int samples_per_axis = 0);
Lemma1Bound lemma1_bound(const Incision& incision, int samples_per_axis = 0);

// One connected component of some level N_i.
struct ChainPiece {
  std::string name;
  int parent = -1;  // index of the enclosing piece, -1 for M itself
  ImplicitManifold manifold;
  // ∂_piece antiderivative = parent's antiderivative (the integrand for M).
  VectorField antiderivative;
  // Unit outward normal relative to the parent; empty for M.
  PointFunction outward_normal;
  Chart sampler;              // [0,1]^dim onto the piece, for checks
  PointPredicate excluded;    // branch-cut locus skipped by checks
  // 1-D pieces: what is left after the incision, charted along the piece's
  // orientation so that u = 1 is the exit (+1) and u = 0 the entry (-1).
  std::optional<ManifoldPatch> segment;
};

struct SignedPoint {
  Multivector point;
  int sign = 1;
  std::size_t piece = 0;
};

struct IntegrationChain {
  std::string scenario;
  Algebra algebra;
  int dim;  // m
  VectorField integrand;
  std::vector<ChainPiece> pieces;
  std::vector<Incision> incisions;
  std::vector<SignedPoint> points;
  std::vector<std::pair<std::string, double>> params;
  double epsilon = 0.0;  // incision size this chain was built for
};

struct IncisionSummary {
  std::string name;
  int level = 0;
  double volume = 0.0;
  double sup = 0.0;
  double bound = 0.0;
  bool sup_is_estimate = false;
};

struct ChainDiagnostics {
  double max_derivative_residual = 0.0;
  double max_orientation_residual = 0.0;
  double max_continuity_ratio = 0.0;
  std::size_t derivative_samples = 0;
};

struct IntegrationReport {
  std::string scenario;
  std::vector<std::pair<std::string, double>> params;
  double epsilon = 0.0;
  Multivector result;
  double error_bound = 0.0;
  std::vector<IncisionSummary> incisions;
  // Contribution of each top-level boundary piece (children of M).
  std::vector<std::pair<std::string, Multivector>> partials;
  std::optional<DirectedIntegralResult> oracle;
  std::optional<double> oracle_delta;
  // oracle_delta <= error_bound + oracle estimated_error (true without oracle).
  bool bound_satisfied = true;
  ChainDiagnostics diagnostics;
};

struct ChainOptions {
  bool validate = true;
  std::size_t check_points = 24;  // per piece
  double derivative_tol = 1e-6;
  double orientation_tol = 1e-8;
  std::size_t continuity_samples = 1000;
  double continuity_factor = 10.0;
  std::optional<DirectedIntegralResult> oracle;
};

// Evaluates sum_i s_i F(x_i) and the error ledger. With validation on, it
// first checks the dimension ladder, every piece's antiderivative, the
// boundary orientation rule and the terminal signs, and continuity along
// each segment. Throws ChainInvalid or OrientationError.
IntegrationReport run_chain(const IntegrationChain& chain, const ChainOptions& options = {});

// Largest ||F(x_{k+1}) - F(x_k)|| / (L_k ||x_{k+1} - x_k||) along a 1-D chart,
// where L_k is the larger of ||field|| at the two samples (||∂F|| = ||field||
// on a curve). Values near 1 mean F is continuous along the path.
double max_continuity_ratio(const VectorField& antiderivative, const VectorField& field, const Chart& path,
                            std::size_t samples);

using ChainFactory = std::function<IntegrationChain(double epsilon)>;

struct SweepEntry {
  double epsilon = 0.0;
  Multivector result;
  double error_bound = 0.0;
  std::optional<double> delta;  // vs oracle
  bool bound_satisfied = true;
};

struct SweepReport {
  std::string scenario;
  std::vector<std::pair<std::string, double>> params;
  std::vector<SweepEntry> sweep;
  Multivector extrapolated;
  std::vector<std::pair<std::string, Multivector>> extrapolated_partials;
  double convergence_order = 0.0;
  std::optional<DirectedIntegralResult> oracle;
  IntegrationReport finest;  // report at the smallest epsilon
  bool all_bounds_satisfied = true;
};

// Runs the chain at every epsilon and Richardson-extrapolates to zero.
SweepReport run_sweep(const ChainFactory& factory, std::span<const double> epsilons,
                      const std::optional<DirectedIntegralResult>& oracle = {}, const ChainOptions& options = {});

// Disk of the given radius in the plane `plane` (unit bivector I2) of an
// ambient algebra, integrand f ≡ scale. Levels: disk (F = scale x/2),
// circle minus the arc within cut_halfwidth of x0 (F = scale ½x² log(x x0)),
// and the two arc end points.
struct DiskParams {
  int dim = 2;
  double radius = 1.0;
  std::optional<Multivector> plane;
  std::optional<Multivector> reference;
  double cut_halfwidth = 1e-3;  // in (0, pi/4)
  double scale = 1.0;
  double branch_start = kDefaultBranchStart;
};

IntegrationChain disk_scenario(const DiskParams& params);
ManifoldPatch disk_patch(const DiskParams& params, int cells_per_axis);

// Right circular cylinder (ω⌊x)^2 <= r^2, 0 <= height <= h inside I3, edges
// rounded by a circular chamfer of radius `chamfer`. Levels: body
// (F = x/3), side and caps, four rim circles each cut by an arc of
// half-width cut_halfwidth (defaults to the chamfer), and their end points.
struct CylinderParams {
  int dim = 3;
  double radius = 1.0;
  double height = 1.0;
  std::optional<Multivector> omega;
  std::optional<Multivector> volume;
  std::optional<Multivector> reference;
  double chamfer = 1e-2;  // < min(r, h) / 4
  std::optional<double> cut_halfwidth;
  double branch_start = kDefaultBranchStart;
};

IntegrationChain cylinder_scenario(const CylinderParams& params);
ManifoldPatch cylinder_patch(const CylinderParams& params, int radial_cells);

struct BranchCutReport {
  std::vector<std::pair<double, Multivector>> jumps;  // per incision size
  Multivector jump;      // extrapolated to a vanishing incision
  Multivector integral;  // reference value of the full integral
  double mismatch = 0.0;  // ||jump - integral||
  double max_continuity_ratio = 0.0;
  bool nonzero = false;
};

// Jump of the terminal antiderivative across its cut, sum_i s_i F(x_i), as
// the incision shrinks; compared with an independent value of the integral.
BranchCutReport verify_branch_cut_necessity(const ChainFactory& factory, std::span<const double> epsilons,
                                            const Multivector& integral);

// y(x) = log(x x0) x0, the map taking the circle to a line.
Multivector circle_line_map(const Multivector& x, const Multivector& x0, const Multivector& plane,
                            double branch_start = kDefaultBranchStart);

// dx = dy x0^{-1} exp(y x0^{-1}) x0^{-1} with y = y(x). Throws DomainError
// on the branch cut of log(x x0).
Multivector circle_change_of_variables(const Multivector& x0, const Multivector& x, const Multivector& dy,
                                       const Multivector& plane, double branch_start = kDefaultBranchStart);

struct ChangeOfVariablesCheck {
  Multivector tangent;      // unit circle tangent dx at x
  Multivector pushforward;  // dy from the finite-difference differential
  Multivector pulled_back;  // closed form applied to dy
  double residual = 0.0;    // ||pulled_back - tangent||
  double length_ratio = 0.0;  // ||dx|| / ||dy||
};

ChangeOfVariablesCheck verify_circle_change_of_variables(const Multivector& x0, const Multivector& x,
                                                         const Multivector& plane,
                                                         double branch_start = kDefaultBranchStart);

}  // namespace gcint
