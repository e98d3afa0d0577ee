#include "gcint/boundary_method.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "gcint/errors.hpp"
#include "gcint/extrapolation.hpp"

namespace gcint {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Angular distance from the cut below which log(x x0) is not evaluated.
constexpr double kCutAngle = 1e-9;

Blade unit_blade(const Multivector& m) { return Blade(m / m.norm()); }

Multivector unit(const Multivector& v) { return v / v.norm(); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Segment chart that walks a circle (centre + rho (cos th x0 + sin th y0))
// away from the cut at angle 0, in the direction of the circle's tangent
// pseudoscalar.
ManifoldPatch cut_circle_segment(Algebra alg, const std::string& name, const Multivector& centre,
                                 const Multivector& x0, const Multivector& y0, double rho, double delta,
                                 const std::function<Blade(const Multivector&)>& tangent) {
  const Multivector probe = centre - x0 * rho;  // angle pi
  const Multivector ccw = y0 * -1.0;            // d/dth at pi
  const bool forward = scalar_product(tangent(probe).value(), ccw) > 0.0;
  const double span = kTwoPi - 2.0 * delta;
  Chart chart = [=](std::span<const double> u) {
    const double th = forward ? delta + span * u[0] : (kTwoPi - delta) - span * u[0];
    return centre + (x0 * std::cos(th) + y0 * std::sin(th)) * rho;
  };
  return ManifoldPatch(alg, 1, std::move(chart), +1, 64, name);
}

ManifoldPatch cut_arc(Algebra alg, const std::string& name, const Multivector& centre, const Multivector& x0,
                      const Multivector& y0, double rho, double delta) {
  Chart chart = [=](std::span<const double> u) {
    const double th = -delta + 2.0 * delta * u[0];
    return centre + (x0 * std::cos(th) + y0 * std::sin(th)) * rho;
  };
  return ManifoldPatch(alg, 1, std::move(chart), +1, 64, name);
}

// In-plane angle of x - centre from x0, in [0, pi].
double angle_from(const Multivector& p, const Multivector& x0) {
  const double n = p.norm();
  if (n == 0.0) return kPi;
  return std::acos(std::clamp(scalar_product(p / n, x0), -1.0, 1.0));
}

void add_terminal_points(IntegrationChain& chain, std::size_t piece) {
  const ManifoldPatch& seg = *chain.pieces[piece].segment;
  const std::array<double, 1> start{0.0};
  const std::array<double, 1> end{1.0};
  chain.points.push_back({seg.point(end), +1, piece});
  chain.points.push_back({seg.point(start), -1, piece});
}

Multivector evaluate_even_exp(const Multivector& z) {
  // z = s + B with B a bivector: e^s (cos |B| + B sin |B| / |B|)
  if (z.grade(0).norm() + z.grade(2).norm() < z.norm() * (1.0 - 1e-12)) {
    throw std::invalid_argument("exponential: expected scalar plus bivector");
  }
  return exp_bivector(z.grade(2)) * std::exp(z.scalar_part());
}

std::size_t root_child(const IntegrationChain& chain, std::size_t piece) {
  std::size_t k = piece;
  while (chain.pieces[k].parent > 0) k = static_cast<std::size_t>(chain.pieces[k].parent);
  return k;
}

const VectorField& parent_field(const IntegrationChain& chain, const ChainPiece& piece) {
  return piece.parent < 0 ? chain.integrand : chain.pieces[static_cast<std::size_t>(piece.parent)].antiderivative;
}

void validate_ladder(const IntegrationChain& chain) {
  if (chain.pieces.empty()) throw ChainInvalid(chain.scenario + ": chain has no manifolds");
  const ChainPiece& root = chain.pieces.front();
  if (root.parent != -1 || root.manifold.dim != chain.dim) {
    throw ChainInvalid(chain.scenario + ": first piece must be the " + std::to_string(chain.dim) + "-manifold M");
  }
  for (std::size_t k = 1; k < chain.pieces.size(); ++k) {
    const ChainPiece& p = chain.pieces[k];
    if (p.parent < 0 || static_cast<std::size_t>(p.parent) >= k) {
      throw ChainInvalid(chain.scenario + ": piece '" + p.name + "' must name an earlier parent");
    }
    const ChainPiece& parent = chain.pieces[static_cast<std::size_t>(p.parent)];
    if (p.manifold.dim != parent.manifold.dim - 1) {
      throw ChainInvalid(chain.scenario + ": dimension of '" + p.name + "' is " + std::to_string(p.manifold.dim) +
                         ", expected " + std::to_string(parent.manifold.dim - 1));
    }
    if (!p.outward_normal) throw ChainInvalid(chain.scenario + ": piece '" + p.name + "' has no outward normal");
    if (p.manifold.dim == 1 && !p.segment) {
      throw ChainInvalid(chain.scenario + ": 1-D piece '" + p.name + "' has no terminal segment");
    }
  }
  for (const SignedPoint& sp : chain.points) {
    if (sp.piece >= chain.pieces.size() || chain.pieces[sp.piece].manifold.dim != 1) {
      throw ChainInvalid(chain.scenario + ": signed point not attached to a 1-D piece");
    }
    if (sp.sign != 1 && sp.sign != -1) throw OrientationError(chain.scenario + ": point signs must be +1 or -1");
  }
}

void check_piece(const IntegrationChain& chain, const ChainPiece& piece, const ChainOptions& options,
                 ChainDiagnostics& diag) {
  const VectorField& expected_field = parent_field(chain, piece);
  std::size_t used = 0;
  for (std::uint64_t i = 1; used < options.check_points && i <= 10 * options.check_points + 10; ++i) {
    const Multivector x = piece.sampler(quasi_random_point(piece.manifold.dim, i));
    if (piece.excluded && piece.excluded(x)) continue;
    ++used;
    const Multivector expected = expected_field(x);
    const Multivector got = vector_derivative(piece.antiderivative, piece.manifold, x);
    const double residual = (got - expected).norm() / std::max(1.0, expected.norm());
    diag.max_derivative_residual = std::max(diag.max_derivative_residual, residual);
    if (!(residual <= options.derivative_tol)) {
      throw ChainInvalid(chain.scenario + ": antiderivative of '" + piece.name + "' fails its derivative check (" +
                         fmt(residual) + ")");
    }
    if (piece.parent >= 0) {
      const ChainPiece& parent = chain.pieces[static_cast<std::size_t>(piece.parent)];
      const Multivector n = piece.outward_normal(x);
      const Multivector lhs = piece.manifold.tangent_pseudoscalar(x).value() * n;
      const double orient = (lhs - parent.manifold.tangent_pseudoscalar(x).value()).norm() +
                            std::abs(n.norm() - 1.0);
      diag.max_orientation_residual = std::max(diag.max_orientation_residual, orient);
      if (!(orient <= options.orientation_tol)) {
        throw OrientationError(chain.scenario + ": '" + piece.name + "' violates I_child n = I_parent (" +
                               fmt(orient) + ")");
      }
    }
  }
  diag.derivative_samples += used;
}

void check_segment(const IntegrationChain& chain, std::size_t index, const ChainOptions& options,
                   ChainDiagnostics& diag) {
  const ChainPiece& piece = chain.pieces[index];
  const ManifoldPatch& seg = *piece.segment;
  if (seg.dim != 1) throw ChainInvalid(chain.scenario + ": segment of '" + piece.name + "' is not 1-D");
  for (double u : {0.05, 0.25, 0.5, 0.75, 0.95}) {
    const std::array<double, 1> uu{u};
    const Multivector x = seg.point(uu);
    if (!piece.manifold.contains(x, 1e-8)) {
      throw ChainInvalid(chain.scenario + ": segment of '" + piece.name + "' leaves its circle");
    }
    const double along = scalar_product(seg.measure(uu), piece.manifold.tangent_pseudoscalar(x).value());
    if (!(along > 0.0)) {
      throw OrientationError(chain.scenario + ": segment of '" + piece.name + "' runs against its orientation");
    }
  }
  const std::vector<ManifoldPatch> ends = boundary_patches(seg);
  for (const SignedPoint& sp : chain.points) {
    if (sp.piece != index) continue;
    const double tol = 1e-9 * std::max(1.0, sp.point.norm());
    bool matched = false;
    for (const ManifoldPatch& end : ends) {
      if (distance(end.point({}), sp.point) > tol) continue;
      matched = true;
      if (end.orientation != sp.sign) {
        throw OrientationError(chain.scenario + ": point on '" + piece.name + "' has sign " +
                               std::to_string(sp.sign) + " but the segment " +
                               (end.orientation > 0 ? "exits" : "enters") + " there");
      }
    }
    if (!matched) throw OrientationError(chain.scenario + ": point on '" + piece.name + "' is not a segment end");
  }
  const double ratio = max_continuity_ratio(piece.antiderivative, parent_field(chain, piece), seg.chart,
                                            options.continuity_samples);
  diag.max_continuity_ratio = std::max(diag.max_continuity_ratio, ratio);
  if (!(ratio < options.continuity_factor)) {
    throw ChainInvalid(chain.scenario + ": antiderivative of '" + piece.name +
                       "' jumps along its segment (branch mismatch, ratio " + fmt(ratio) + ")");
  }
}

}  // namespace

namespace {

Lemma1Bound lemma1_impl(const Incision& incision, const VectorField* f, int samples_per_axis) {
  if (!(incision.volume >= 0.0)) throw std::invalid_argument("incision '" + incision.name + "': negative volume");
  Lemma1Bound out;
  if (incision.exact_sup) {
    out.sup = *incision.exact_sup;
  } else {
    if (!incision.region) throw BoundUnavailable("incision '" + incision.name + "': no region to sample");
    if (f == nullptr) throw BoundUnavailable("incision '" + incision.name + "': no integrand attached");
    const ManifoldPatch& region = *incision.region;
    int n = samples_per_axis;
    if (n <= 0) n = region.dim <= 1 ? 1024 : (region.dim == 2 ? 96 : 24);
    std::size_t total = 1;
    for (int k = 0; k < region.dim; ++k) total *= static_cast<std::size_t>(n);
    std::vector<double> u(static_cast<std::size_t>(region.dim));
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      for (double& uk : u) {
        uk = n == 1 ? 0.5 : static_cast<double>(rest % static_cast<std::size_t>(n)) / (n - 1);
        rest /= static_cast<std::size_t>(n);
      }
      const double v = (*f)(region.point(u)).norm();
      if (!std::isfinite(v)) throw BoundUnavailable("incision '" + incision.name + "': unbounded integrand sample");
      out.sup = std::max(out.sup, v);
    }
    out.samples = total;
    out.estimate = true;
  }
  if (!std::isfinite(out.sup)) throw BoundUnavailable("incision '" + incision.name + "': sup is not finite");
  out.bound = incision.volume == 0.0 ? 0.0 : incision.volume * out.sup * kSupSafetyFactor;
  return out;
}

}  // namespace

Lemma1Bound lemma1_bound(const Incision& incision, const VectorField& f, int samples_per_axis) {
  return lemma1_impl(incision, &f, samples_per_axis);
}

Lemma1Bound lemma1_bound(const Incision& incision, int samples_per_axis) {
  return lemma1_impl(incision, incision.field ? &*incision.field : nullptr, samples_per_axis);
}

double max_continuity_ratio(const VectorField& antiderivative, const VectorField& field, const Chart& path,
                            std::size_t samples) {
  if (samples < 2) return 0.0;
  double worst = 0.0;
  std::array<double, 1> u{0.0};
  Multivector x_prev = path(u);
  Multivector f_prev = antiderivative(x_prev);
  double l_prev = field(x_prev).norm();
  for (std::size_t k = 1; k < samples; ++k) {
    u[0] = static_cast<double>(k) / static_cast<double>(samples - 1);
    const Multivector x = path(u);
    const Multivector f = antiderivative(x);
    const double l = field(x).norm();
    const double step = distance(x, x_prev);
    const double jump = distance(f, f_prev);
    const double scale = std::max(l, l_prev) * step;
    if (scale > 0.0) {
      worst = std::max(worst, jump / scale);
    } else if (jump > 1e-14) {
      worst = std::numeric_limits<double>::infinity();
    }
    x_prev = x;
    f_prev = f;
    l_prev = l;
  }
  return worst;
}

IntegrationReport run_chain(const IntegrationChain& chain, const ChainOptions& options) {
  validate_ladder(chain);
  IntegrationReport report;
  report.scenario = chain.scenario;
  report.params = chain.params;
  report.epsilon = chain.epsilon;

  if (options.validate) {
    for (const ChainPiece& piece : chain.pieces) check_piece(chain, piece, options, report.diagnostics);
    for (std::size_t k = 0; k < chain.pieces.size(); ++k) {
      if (chain.pieces[k].manifold.dim == 1) check_segment(chain, k, options, report.diagnostics);
    }
  }

  Multivector result(chain.algebra);
  std::vector<Multivector> partial(chain.pieces.size(), Multivector(chain.algebra));
  for (const SignedPoint& sp : chain.points) {
    const Multivector term = chain.pieces[sp.piece].antiderivative(sp.point) * static_cast<double>(sp.sign);
    result += term;
    partial[root_child(chain, sp.piece)] += term;
  }
  report.result = result;
  for (std::size_t k = 1; k < chain.pieces.size(); ++k) {
    if (chain.pieces[k].parent == 0) report.partials.emplace_back(chain.pieces[k].name, partial[k]);
  }

  double max_sup = 0.0;
  double total_volume = 0.0;
  for (const Incision& e : chain.incisions) {
    const Lemma1Bound b = lemma1_bound(e);
    report.incisions.push_back({e.name, e.level, e.volume, b.sup, b.bound, b.estimate});
    max_sup = std::max(max_sup, b.sup);
    total_volume += e.volume;
  }
  report.error_bound = total_volume == 0.0 ? 0.0 : kSupSafetyFactor * max_sup * total_volume;

  if (options.oracle) {
    report.oracle = options.oracle;
    report.oracle_delta = distance(result, options.oracle->value);
    report.bound_satisfied = *report.oracle_delta <= report.error_bound + options.oracle->estimated_error;
  }
  return report;
}

SweepReport run_sweep(const ChainFactory& factory, std::span<const double> epsilons,
                      const std::optional<DirectedIntegralResult>& oracle, const ChainOptions& options) {
  if (epsilons.empty()) throw std::invalid_argument("run_sweep: empty epsilon sweep");
  SweepReport out;
  ChainOptions opts = options;
  opts.oracle = oracle;
  std::vector<Multivector> results;
  std::vector<std::vector<Multivector>> partials;
  std::size_t finest = 0;
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    IntegrationReport rep = run_chain(factory(epsilons[k]), opts);
    out.sweep.push_back({epsilons[k], rep.result, rep.error_bound, rep.oracle_delta, rep.bound_satisfied});
    out.all_bounds_satisfied = out.all_bounds_satisfied && rep.bound_satisfied;
    results.push_back(rep.result);
    for (std::size_t j = 0; j < rep.partials.size(); ++j) {
      if (partials.size() <= j) partials.emplace_back();
      partials[j].push_back(rep.partials[j].second);
    }
    if (k == 0 || epsilons[k] < epsilons[finest]) {
      finest = k;
      out.finest = std::move(rep);
    }
  }
  out.scenario = out.finest.scenario;
  out.params = out.finest.params;
  out.oracle = oracle;
  out.extrapolated = extrapolate_to_zero(epsilons, std::span<const Multivector>(results));
  for (std::size_t j = 0; j < partials.size(); ++j) {
    out.extrapolated_partials.emplace_back(out.finest.partials[j].first,
                                           extrapolate_to_zero(epsilons, std::span<const Multivector>(partials[j])));
  }
  std::vector<double> errors;
  for (const Multivector& r : results) errors.push_back(distance(r, out.extrapolated));
  out.convergence_order = convergence_order(epsilons, errors);
  return out;
}

// ---------------------------------------------------------------- disk

namespace {

struct DiskGeometry {
  Algebra alg;
  Multivector plane;  // unit I2
  Multivector x0;     // reference as given
  Multivector x0u;
  Multivector y0u;
};

DiskGeometry disk_geometry(const DiskParams& p) {
  if (!(p.radius > 0.0)) throw std::invalid_argument("disk: radius must be positive");
  const Algebra alg(p.dim);
  const Multivector plane_in = p.plane.value_or(Multivector::basis_blade(alg, 0b11));
  if (!(plane_in.algebra() == alg)) throw AlgebraMismatch("disk: plane from a different algebra");
  const Blade plane = unit_blade(plane_in);
  if (plane.grade() != 2) throw std::invalid_argument("disk: plane must be a bivector");
  const Multivector x0 = p.reference.value_or(Multivector::basis_vector(alg, 0));
  if (!(x0.algebra() == alg)) throw AlgebraMismatch("disk: reference from a different algebra");
  if (x0.off_grade_residual(1) > 0.0 || x0.norm() == 0.0) throw std::invalid_argument("disk: x0 must be a nonzero vector");
  if (reject(plane, x0).norm() > 1e-12 * x0.norm()) throw std::invalid_argument("disk: x0 must lie in the plane");
  const Multivector x0u = unit(x0);
  return DiskGeometry{alg, plane.value(), x0, x0u, right_contraction(x0u, plane.value())};
}

}  // namespace

IntegrationChain disk_scenario(const DiskParams& p) {
  const DiskGeometry g = disk_geometry(p);
  const double r = p.radius;
  const double delta = p.cut_halfwidth;
  if (!(delta > 0.0 && delta < kPi / 4.0)) throw std::invalid_argument("disk: cut half-width must lie in (0, pi/4)");
  const double c = p.scale;
  const Algebra alg = g.alg;

  ScenarioParams sp;
  sp.radius = r;
  sp.plane = g.plane;
  sp.reference = g.x0;
  sp.branch_start = p.branch_start;
  AntiderivativeEntry circle = scenario_entry("circle", alg, sp);

  IntegrationChain chain{"disk", alg, 2, VectorField::constant(Multivector::scalar(alg, c)), {}, {}, {}, {}, delta};
  chain.params = {{"dim", static_cast<double>(p.dim)}, {"radius", r}, {"cut_halfwidth", delta}, {"scale", c}};

  const VectorField f1(alg, [c](const Multivector& x) { return x * (0.5 * c); });
  const Multivector x0u = g.x0u;
  const Multivector y0u = g.y0u;
  chain.pieces.push_back(ChainPiece{
      "disk",
      -1,
      ImplicitManifold::flat(Blade(g.plane)),
      f1,
      {},
      [x0u, y0u, r](std::span<const double> u) {
        const double th = kTwoPi * u[1];
        return (x0u * std::cos(th) + y0u * std::sin(th)) * (0.95 * r * std::sqrt(u[0]));
      },
      {},
      std::nullopt});

  const VectorField base = circle.antiderivative;
  const VectorField f2(alg, [base, c](const Multivector& x) { return base(x) * c; });
  const Multivector origin(alg);
  ManifoldPatch segment =
      cut_circle_segment(alg, "circle segment", origin, x0u, y0u, r, delta, circle.manifold.tangent_pseudoscalar);
  chain.pieces.push_back(ChainPiece{"circle", 0, circle.manifold, f2,
                                    [](const Multivector& x) { return unit(x); }, circle.sampler,
                                    circle.branch->near_cut, std::move(segment)});
  add_terminal_points(chain, 1);

  chain.incisions.push_back(Incision{"cut arc",
                                     1,
                                     [x0u, delta](const Multivector& x) { return angle_from(x, x0u) < delta; },
                                     2.0 * delta * r,
                                     cut_arc(alg, "cut arc", origin, x0u, y0u, r, delta),
                                     f1,
                                     std::abs(c) * r / 2.0});
  return chain;
}

ManifoldPatch disk_patch(const DiskParams& p, int cells_per_axis) {
  const DiskGeometry g = disk_geometry(p);
  const double r = p.radius;
  const Multivector x0u = g.x0u;
  const Multivector y0u = g.y0u;
  Chart chart = [x0u, y0u, r](std::span<const double> u) {
    const double th = kTwoPi * u[1];
    return (x0u * std::cos(th) + y0u * std::sin(th)) * (r * u[0]);
  };
  ManifoldPatch patch(g.alg, 2, std::move(chart), +1, cells_per_axis, "disk");
  const std::array<double, 2> mid{0.5, 0.5};
  patch.orientation = scalar_product(patch.measure(mid), g.plane) >= 0.0 ? +1 : -1;
  patch.degenerate = true;
  return patch;
}

// ------------------------------------------------------------ cylinder

namespace {

struct CylinderGeometry {
  Algebra alg;
  CylinderFrame frame;
  Multivector x0;   // reference as given, inside ω
  Multivector x0u;
  Multivector y0u;
};

CylinderGeometry cylinder_geometry(const CylinderParams& p) {
  if (!(p.radius > 0.0) || !(p.height > 0.0)) throw std::invalid_argument("cylinder: radius and height must be positive");
  if (p.dim < 3) throw std::invalid_argument("cylinder: ambient dimension must be at least 3");
  const Algebra alg(p.dim);
  const Multivector omega = p.omega.value_or(Multivector::basis_blade(alg, 0b011));
  const Multivector volume = p.volume.value_or(Multivector::basis_blade(alg, 0b111));
  if (!(omega.algebra() == alg) || !(volume.algebra() == alg)) {
    throw AlgebraMismatch("cylinder: omega and I3 must come from the ambient algebra");
  }
  CylinderFrame frame(omega, volume);
  const Multivector ref = p.reference.value_or(Multivector::basis_vector(alg, 0));
  const Multivector x0 = project(Blade(frame.omega), ref);
  if (x0.norm() < 1e-12 * std::max(1.0, ref.norm())) throw std::invalid_argument("cylinder: reference must not be normal to omega");
  const Multivector x0u = unit(x0);
  return CylinderGeometry{alg, frame, x0, x0u, right_contraction(x0u, frame.omega)};
}

// Volume of one rounded edge: the ε x ε corner square minus its quarter
// disk, revolved about the axis (Pappus).
double chamfer_edge_volume(double r, double eps) {
  const double square = eps * eps * (r - eps / 2.0);
  const double quarter = (kPi * eps * eps / 4.0) * (r - eps) + eps * eps * eps / 3.0;
  return kTwoPi * (square - quarter);
}

// Area of one quarter-torus edge surface.
double chamfer_edge_area(double r, double eps) { return kTwoPi * (r - eps + 2.0 * eps / kPi) * (kPi * eps / 2.0); }

}  // namespace

IntegrationChain cylinder_scenario(const CylinderParams& p) {
  const CylinderGeometry g = cylinder_geometry(p);
  const double r = p.radius;
  const double h = p.height;
  const double eps = p.chamfer;
  if (!(eps > 0.0 && eps < std::min(r, h) / 4.0)) throw std::invalid_argument("cylinder: chamfer must lie in (0, min(r, h)/4)");
  const double delta = p.cut_halfwidth.value_or(eps);
  if (!(delta > 0.0 && delta < kPi / 4.0)) throw std::invalid_argument("cylinder: cut half-width must lie in (0, pi/4)");

  const Algebra alg = g.alg;
  const CylinderFrame frame = g.frame;
  const Multivector a = frame.axis;
  const Multivector I3 = frame.volume;
  const Multivector x0 = g.x0;
  const Multivector x0u = g.x0u;
  const Multivector y0u = g.y0u;
  const Multivector omega = frame.omega;
  const double bs = p.branch_start;

  IntegrationChain chain{"cylinder", alg, 3, VectorField::constant(Multivector::scalar(alg, 1.0)), {}, {}, {}, {}, eps};
  chain.params = {{"dim", static_cast<double>(p.dim)}, {"radius", r}, {"height", h},
                  {"chamfer", eps}, {"cut_halfwidth", delta}};

  ScenarioParams sp;
  sp.radius = r;
  sp.height = h;
  sp.plane = omega;
  sp.volume = I3;
  sp.reference = x0;
  sp.branch_start = bs;

  // Level 3: the body.
  const VectorField f1(alg, [](const Multivector& x) { return x / 3.0; });
  chain.pieces.push_back(ChainPiece{
      "body", -1, ImplicitManifold::flat(Blade(I3)), f1, {},
      [frame, x0u, r, h](std::span<const double> u) {
        return frame.point(x0u, 0.95 * r * std::sqrt(u[0]), kTwoPi * u[1], h * (0.05 + 0.9 * u[2]));
      },
      {}, std::nullopt});

  // Level 2: side and caps.
  AntiderivativeEntry side = scenario_entry("cylinder-side", alg, sp);
  const VectorField side_base = side.antiderivative;
  chain.pieces.push_back(ChainPiece{
      "side", 0, side.manifold,
      VectorField(alg, [side_base](const Multivector& x) { return side_base(x) / 3.0; }),
      [frame](const Multivector& x) { return unit(frame.in_plane(x)); },
      [frame, x0u, r, h, eps](std::span<const double> u) {
        return frame.point(x0u, r, kTwoPi * u[0], eps + (h - 2.0 * eps) * u[1]);
      },
      {}, std::nullopt});

  for (int top = 1; top >= 0; --top) {
    ScenarioParams cp = sp;
    cp.cap_height = top ? h : 0.0;
    AntiderivativeEntry cap = scenario_entry("cylinder-cap", alg, cp);
    const Multivector n = top ? a : a * -1.0;
    const Blade ps = unit_blade((I3 * n).grade(2));
    cap.manifold.tangent_pseudoscalar = [ps](const Multivector&) { return ps; };
    const VectorField cap_base = cap.antiderivative;
    const double t0 = cp.cap_height;
    chain.pieces.push_back(ChainPiece{
        top ? "top cap" : "bottom cap", 0, cap.manifold,
        VectorField(alg, [cap_base](const Multivector& x) { return cap_base(x) / 3.0; }),
        [n](const Multivector&) { return n; },
        [frame, x0u, r, eps, t0](std::span<const double> u) {
          return frame.point(x0u, 0.95 * (r - eps) * std::sqrt(u[1]), kTwoPi * u[0], t0);
        },
        {}, std::nullopt});
  }

  // Level 1: four rim circles, each cut at +x0.
  // Side circles: F = (t^2 x - t a p^2 log(p x0)) / 3.
  // Cap circles:  F = (p^2 x / 2 + p^2 log(p x0) t a / 2) / 3.
  auto k_tilde = [x0, omega, bs](const Multivector& p) { return circle_log_primitive(p, x0, omega, bs) * 2.0; };
  const VectorField side_circle_f(alg, [frame, a, k_tilde](const Multivector& x) {
    const double t = frame.height(x);
    const Multivector p = frame.in_plane(x);
    return (x * (t * t) - a * k_tilde(p) * t) / 3.0;
  });
  const VectorField cap_circle_f(alg, [frame, a, k_tilde](const Multivector& x) {
    const double t = frame.height(x);
    const Multivector p = frame.in_plane(x);
    return (x * (0.5 * (p * p).scalar_part()) + k_tilde(p) * a * (0.5 * t)) / 3.0;
  });

  struct RimSpec {
    const char* name;
    int parent;
    double rho;
    double t;
    PointFunction normal;
    VectorField field;
  };
  const std::vector<RimSpec> rims = {
      {"side top circle", 1, r, h - eps, [a](const Multivector&) { return a; }, side_circle_f},
      {"side bottom circle", 1, r, eps, [a](const Multivector&) { return a * -1.0; }, side_circle_f},
      {"top cap circle", 2, r - eps, h, [frame](const Multivector& x) { return unit(frame.in_plane(x)); }, cap_circle_f},
      {"bottom cap circle", 3, r - eps, 0.0, [frame](const Multivector& x) { return unit(frame.in_plane(x)); },
       cap_circle_f},
  };
  for (const RimSpec& rim : rims) {
    const auto parent_ps = chain.pieces[static_cast<std::size_t>(rim.parent)].manifold.tangent_pseudoscalar;
    const PointFunction normal = rim.normal;
    const double rho = rim.rho;
    const double t = rim.t;
    ImplicitManifold circle(alg, 1, [parent_ps, normal](const Multivector& x) {
      return unit_blade((parent_ps(x).value() * normal(x)).grade(1));
    });
    circle.constraints.push_back([frame, rho](const Multivector& x) { return frame.radius_squared(x) - rho * rho; });
    circle.constraints.push_back([frame, t](const Multivector& x) { return frame.height(x) - t; });
    if (p.dim > 3) circle.constraints.push_back([I3](const Multivector& x) { return outer_product(I3, x).norm(); });
    circle.retraction = [frame, rho, t](const Multivector& x) {
      return unit(frame.in_plane(x)) * rho + frame.axis * t;
    };
    const Multivector centre = a * t;
    ManifoldPatch segment =
        cut_circle_segment(alg, std::string(rim.name) + " segment", centre, x0u, y0u, rho, delta,
                           circle.tangent_pseudoscalar);
    chain.pieces.push_back(ChainPiece{
        rim.name, rim.parent, std::move(circle), rim.field, normal,
        [frame, x0u, rho, t](std::span<const double> u) { return frame.point(x0u, rho, kTwoPi * u[0], t); },
        [frame, x0u](const Multivector& x) { return angle_from(frame.in_plane(x), x0u) < 1e-2; },
        std::move(segment)});
    const std::size_t index = chain.pieces.size() - 1;
    add_terminal_points(chain, index);

    chain.incisions.push_back(Incision{
        std::string(rim.name) + " cut arc", 1,
        [frame, x0u, delta](const Multivector& x) { return angle_from(frame.in_plane(x), x0u) < delta; },
        2.0 * delta * rho, cut_arc(alg, std::string(rim.name) + " cut arc", centre, x0u, y0u, rho, delta),
        chain.pieces[static_cast<std::size_t>(rim.parent)].antiderivative, std::nullopt});
  }

  // Chamfer: the rounded-off edge volume and its two quarter-torus faces.
  auto in_chamfer = [frame, r, h, eps](const Multivector& x) {
    const double rho = std::sqrt(frame.radius_squared(x));
    const double t = frame.height(x);
    if (rho < r - eps || rho > r) return false;
    const double tc = t > h / 2.0 ? h - eps : eps;
    if (std::abs(t - h / 2.0) < h / 2.0 - eps) return false;
    return std::hypot(rho - (r - eps), t - tc) > eps;
  };
  chain.incisions.push_back(Incision{"chamfer volume", 3, in_chamfer, 2.0 * chamfer_edge_volume(r, eps),
                                     std::nullopt, chain.integrand, 1.0});
  for (int top = 1; top >= 0; --top) {
    Chart chart = [frame, x0u, r, h, eps, top](std::span<const double> u) {
      const double psi = 0.5 * kPi * u[0];
      const double rho = r - eps + eps * std::cos(psi);
      const double t = top ? h - eps + eps * std::sin(psi) : eps - eps * std::sin(psi);
      return frame.point(x0u, rho, kTwoPi * u[1], t);
    };
    auto on_torus = [frame, r, h, eps, top](const Multivector& x) {
      const double rho = std::sqrt(frame.radius_squared(x));
      const double t = frame.height(x);
      const double tc = top ? h - eps : eps;
      const bool outward = rho >= r - eps && (top ? t >= tc : t <= tc);
      return outward && std::abs(std::hypot(rho - (r - eps), t - tc) - eps) < 1e-9 * std::max(1.0, r);
    };
    chain.incisions.push_back(Incision{top ? "top chamfer surface" : "bottom chamfer surface", 2, on_torus,
                                       chamfer_edge_area(r, eps),
                                       ManifoldPatch(alg, 2, std::move(chart), +1, 16, "chamfer surface"), f1,
                                       std::nullopt});
  }
  return chain;
}

ManifoldPatch cylinder_patch(const CylinderParams& p, int radial_cells) {
  const CylinderGeometry g = cylinder_geometry(p);
  const CylinderFrame frame = g.frame;
  const Multivector x0u = g.x0u;
  const double r = p.radius;
  const double h = p.height;
  Chart chart = [frame, x0u, r, h](std::span<const double> u) {
    return frame.point(x0u, r * u[0], kTwoPi * u[1], h * u[2]);
  };
  ManifoldPatch patch(g.alg, 3, std::move(chart), +1, radial_cells, "cylinder");
  const std::array<double, 3> mid{0.5, 0.5, 0.5};
  patch.orientation = scalar_product(patch.measure(mid), frame.volume) >= 0.0 ? +1 : -1;
  patch.degenerate = true;
  return patch;
}

// ----------------------------------------------------------- branch cut

BranchCutReport verify_branch_cut_necessity(const ChainFactory& factory, std::span<const double> epsilons,
                                            const Multivector& integral) {
  if (epsilons.empty()) throw std::invalid_argument("branch cut check: empty epsilon sweep");
  BranchCutReport out;
  out.integral = integral;
  std::vector<Multivector> jumps;
  for (double eps : epsilons) {
    const IntegrationChain chain = factory(eps);
    ChainOptions opts;
    opts.validate = true;
    const IntegrationReport rep = run_chain(chain, opts);
    out.jumps.emplace_back(eps, rep.result);
    jumps.push_back(rep.result);
    for (const ChainPiece& piece : chain.pieces) {
      if (piece.manifold.dim != 1 || !piece.segment) continue;
      const VectorField& field = parent_field(chain, piece);
      out.max_continuity_ratio = std::max(
          out.max_continuity_ratio, max_continuity_ratio(piece.antiderivative, field, piece.segment->chart, 1000));
    }
  }
  out.jump = extrapolate_to_zero(epsilons, std::span<const Multivector>(jumps));
  out.mismatch = distance(out.jump, integral);
  out.nonzero = out.jump.norm() > 0.0;
  return out;
}

// ------------------------------------------------- change of variables

Multivector circle_line_map(const Multivector& x, const Multivector& x0, const Multivector& plane,
                            double branch_start) {
  return log_spinor(x * x0, plane, branch_start) * x0;
}

Multivector circle_change_of_variables(const Multivector& x0, const Multivector& x, const Multivector& dy,
                                       const Multivector& plane, double branch_start) {
  const double phi = spinor_angle(x * x0, plane, branch_start);
  if (phi - branch_start < kCutAngle || branch_start + kTwoPi - phi < kCutAngle) {
    throw DomainError("change of variables: x lies on the branch cut of log(x x0)");
  }
  const Multivector x0_inv = inverse(x0);
  const Multivector y = circle_line_map(x, x0, plane, branch_start);
  return dy * x0_inv * evaluate_even_exp(y * x0_inv) * x0_inv;
}

ChangeOfVariablesCheck verify_circle_change_of_variables(const Multivector& x0, const Multivector& x,
                                                         const Multivector& plane, double branch_start) {
  const double step = default_step(x);
  const double phi = spinor_angle(x * x0, plane, branch_start);
  const double margin = 10.0 * step / x.norm();
  if (phi - branch_start < margin || branch_start + kTwoPi - phi < margin) {
    throw DomainError("change of variables: finite-difference stencil straddles the branch cut");
  }
  ChangeOfVariablesCheck out;
  out.tangent = unit(right_contraction(x, plane).grade(1));
  // Off-plane stencil points are projected back before taking the logarithm.
  const Blade plane_blade(plane);
  const LinearMap dmap = differential(
      [&](const Multivector& p) { return circle_line_map(project(plane_blade, p), x0, plane, branch_start); }, x,
      step);
  out.pushforward = dmap(out.tangent);
  out.pulled_back = circle_change_of_variables(x0, x, out.pushforward, plane, branch_start);
  out.residual = distance(out.pulled_back, out.tangent);
  out.length_ratio = out.tangent.norm() / out.pushforward.norm();
  return out;
}

}  // namespace gcint
