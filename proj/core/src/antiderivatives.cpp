#include "gcint/antiderivatives.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/random/sobol.hpp>

#include "gcint/errors.hpp"

namespace gcint {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Angle from the cut inside which derivative stencils are not trusted.
constexpr double kCutMargin = 1e-2;

Multivector default_vector(Algebra alg) {
  Multivector a(alg);
  for (int i = 0; i < alg.dim(); ++i) a.set(BladeIndex{1} << i, static_cast<double>(i + 1));
  return a / a.norm();
}

// Box [-2, 2]^d, pushed out of the ball of radius 1/4 when the row is
// singular at the origin.
Chart box_sampler(Algebra alg, bool avoid_origin) {
  return [alg, avoid_origin](std::span<const double> u) {
    Multivector x(alg);
    for (int i = 0; i < alg.dim(); ++i) x.set(BladeIndex{1} << i, 4.0 * u[static_cast<std::size_t>(i)] - 2.0);
    const double n = x.norm();
    if (avoid_origin && n < 0.25) x = (n == 0.0) ? Multivector::basis_vector(alg, 0) * 0.25 : x * ((0.25 + n) / n);
    return x;
  };
}

Blade unit_blade(const Multivector& m) { return Blade(m / m.norm()); }

double radial_primitive_quadrature(const std::function<double(double)>& f, int d, double rho) {
  if (rho == 0.0) return 0.0;
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&f, d](double s) { return std::pow(s, d - 1) * f(s); }, 0.0, rho, 8, 1e-14, &error);
  if (!std::isfinite(value) || error > 1e-8 * std::max(1.0, std::abs(value))) {
    throw DomainError("radial antiderivative: profile is not integrable on [0, " + std::to_string(rho) + "]");
  }
  return value;
}

}  // namespace

std::vector<std::string> table_names() { return {"const", "x", "xhat", "ax", "radial"}; }

AntiderivativeEntry table_entry(std::string_view name, int d, const TableOptions& options) {
  const Algebra alg(d);
  const Blade ps(Multivector::pseudoscalar(alg));
  const auto xd = static_cast<double>(d);
  auto make = [&](std::string formula, PointFunction f, PointFunction big_f, bool avoid_origin,
                  PointPredicate domain = {}) {
    return AntiderivativeEntry{std::string(name),
                               std::move(formula),
                               "R^" + std::to_string(d),
                               ImplicitManifold::flat(ps),
                               VectorField(alg, std::move(f), domain),
                               VectorField(alg, std::move(big_f), domain),
                               box_sampler(alg, avoid_origin),
                               std::nullopt};
  };
  const PointPredicate nonzero = [](const Multivector& x) { return x.norm() > 0.0; };

  if (name == "const") {
    return make(
        "F(x) = x / d", [alg](const Multivector&) { return Multivector::scalar(alg, 1.0); },
        [xd](const Multivector& x) { return x / xd; }, false);
  }
  if (name == "x") {
    return make(
        "F(x) = x^2 / 2", [](const Multivector& x) { return x; },
        [](const Multivector& x) { return (x * x) * 0.5; }, false);
  }
  if (name == "xhat") {
    return make(
        "F(x) = |x|", [](const Multivector& x) { return x / x.norm(); },
        [alg](const Multivector& x) { return Multivector::scalar(alg, x.norm()); }, true, nonzero);
  }
  if (name == "ax") {
    const Multivector a = options.a.value_or(default_vector(alg));
    if (!(a.algebra() == alg) || a.off_grade_residual(1) > 0.0) {
      throw std::invalid_argument("table entry 'ax': a must be a vector of the same algebra");
    }
    return make(
        "F(x) = (2 x (x ⌋ a) - d x^2 a / 2) / (d + 2)", [a](const Multivector& x) { return a * x; },
        [a, xd](const Multivector& x) {
          return (x * right_contraction(x, a) * 2.0 - (x * x) * a * (0.5 * xd)) / (xd + 2.0);
        },
        false);
  }
  if (name == "radial") {
    std::function<double(double)> profile =
        options.radial ? options.radial : [](double s) { return 1.0 / (1.0 + s * s); };
    std::function<double(double)> primitive = options.radial_primitive;
    if (!primitive) {
      primitive = [profile, d](double rho) { return radial_primitive_quadrature(profile, d, rho); };
    }
    for (double rho : {0.25, 1.0, 2.0, 2.0 * std::sqrt(xd)}) {
      if (!std::isfinite(primitive(rho)) || !std::isfinite(profile(rho))) {
        throw DomainError("table entry 'radial': profile not integrable at radius " + std::to_string(rho));
      }
    }
    return make(
        "F(x) = x / |x|^d ∫_0^|x| s^(d-1) f(s) ds",
        [profile, alg](const Multivector& x) { return Multivector::scalar(alg, profile(x.norm())); },
        [primitive, d](const Multivector& x) {
          const double rho = x.norm();
          return x * (primitive(rho) / std::pow(rho, d));
        },
        true, nonzero);
  }
  throw std::invalid_argument("unknown antiderivative table row '" + std::string(name) + "'");
}

CylinderFrame::CylinderFrame(Multivector plane, Multivector pseudoscalar)
    : omega(std::move(plane)), omega_inv(gcint::inverse(omega)), volume(std::move(pseudoscalar)), axis(omega * volume) {
  if (omega.homogeneous_grade() != 2 || std::abs(omega.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("cylinder: omega must be a unit bivector");
  }
  if (volume.homogeneous_grade() != 3 || std::abs(volume.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("cylinder: I3 must be a unit trivector");
  }
  if (axis.off_grade_residual(1) > 1e-12 || std::abs(axis.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("cylinder: omega must lie inside I3");
  }
}

Multivector CylinderFrame::in_plane(const Multivector& x) const { return x - rejection(x); }

Multivector CylinderFrame::rejection(const Multivector& x) const { return omega_inv * outer_product(omega, x); }

double CylinderFrame::radius_squared(const Multivector& x) const {
  const Multivector c = left_contraction(omega, x);
  return (c * c).scalar_part();
}

double CylinderFrame::height(const Multivector& x) const {
  return left_contraction(rejection(x), omega * volume).scalar_part();
}

Multivector CylinderFrame::point(const Multivector& x0_unit, double rho, double theta, double h) const {
  const Multivector y0 = right_contraction(x0_unit, omega);
  return (x0_unit * std::cos(theta) + y0 * std::sin(theta)) * rho + axis * h;
}

Multivector circle_log_primitive(const Multivector& p, const Multivector& x0, const Multivector& plane,
                                 double branch_start) {
  return log_spinor(p * x0, plane, branch_start) * ((p * p).scalar_part() * 0.5);
}

std::vector<std::string> scenario_names() { return {"circle", "cylinder-side", "cylinder-cap"}; }

AntiderivativeEntry scenario_entry(std::string_view name, Algebra alg, const ScenarioParams& params) {
  const double r = params.radius;
  if (!(r > 0.0)) throw std::invalid_argument("scenario entry: radius must be positive");

  if (name == "circle") {
    const Multivector plane = params.plane.value_or(Multivector::basis_blade(alg, 0b11));
    const Multivector x0 = params.reference.value_or(Multivector::basis_vector(alg, 0));
    const Blade plane_blade = unit_blade(plane);
    const Multivector x0_unit = x0 / x0.norm();
    const Multivector y0 = right_contraction(x0_unit, plane_blade.value());
    const double branch_start = params.branch_start;

    ImplicitManifold circle(alg, 1, [plane_blade](const Multivector& x) {
      const Multivector p = project(plane_blade, x);
      return unit_blade((plane_blade.value() * (p / p.norm())).grade(1));
    });
    circle.constraints.push_back([r](const Multivector& x) { return x.norm_squared() - r * r; });
    if (alg.dim() > 2) circle.constraints.push_back([plane_blade](const Multivector& x) { return reject(plane_blade, x).norm(); });
    circle.retraction = [plane_blade, r](const Multivector& x) {
      const Multivector p = project(plane_blade, x);
      return p * (r / p.norm());
    };

    const Multivector pv = plane_blade.value();
    BranchInfo branch{pv, x0, branch_start, "ray from the centre through x0",
                      [x0_unit](const Multivector& x) {
                        const double c = scalar_product(x / x.norm(), x0_unit);
                        return c > std::cos(kCutMargin);
                      }};
    return AntiderivativeEntry{
        "circle",
        "F(x) = x^2 log(x x0) / 2",
        "circle",
        std::move(circle),
        VectorField(alg, [](const Multivector& x) { return x * 0.5; }),
        VectorField(alg, [x0, pv, branch_start](const Multivector& x) {
          return circle_log_primitive(x, x0, pv, branch_start);
        }),
        [x0_unit, y0, r](std::span<const double> u) {
          const double theta = kTwoPi * u[0];
          return (x0_unit * std::cos(theta) + y0 * std::sin(theta)) * r;
        },
        std::move(branch)};
  }

  if (name == "cylinder-side" || name == "cylinder-cap") {
    if (alg.dim() < 3) throw std::invalid_argument("cylinder entries need an ambient dimension of at least 3");
    const CylinderFrame frame(params.plane.value_or(Multivector::basis_blade(alg, 0b011)),
                              params.volume.value_or(Multivector::basis_blade(alg, 0b111)));
    const Multivector x0 = params.reference.value_or(Multivector::basis_vector(alg, 0));
    const Multivector x0_unit = project(Blade(frame.omega), x0) / project(Blade(frame.omega), x0).norm();
    const double h = params.height;
    const Multivector I3 = frame.volume;

    if (name == "cylinder-side") {
      ImplicitManifold side(alg, 2, [frame, I3](const Multivector& x) {
        const Multivector p = frame.in_plane(x);
        return unit_blade((I3 * (p / p.norm())).grade(2));
      });
      side.constraints.push_back([frame, r](const Multivector& x) { return frame.radius_squared(x) - r * r; });
      if (alg.dim() > 3) side.constraints.push_back([I3](const Multivector& x) { return outer_product(I3, x).norm(); });
      side.domain = [frame, h](const Multivector& x) {
        const double t = frame.height(x);
        return t > 0.0 && t < h;
      };
      side.retraction = [frame, r](const Multivector& x) {
        const Multivector p = frame.in_plane(x);
        return p * (r / p.norm()) + frame.axis * frame.height(x);
      };
      return AntiderivativeEntry{
          "cylinder-side",
          "F(x) = r_w(x) x",
          "cylinder side",
          std::move(side),
          VectorField(alg, [](const Multivector& x) { return x; }),
          VectorField(alg, [frame](const Multivector& x) { return frame.rejection(x) * x; }),
          [frame, x0_unit, r, h](std::span<const double> u) {
            return frame.point(x0_unit, r, kTwoPi * u[0], h * (0.05 + 0.9 * u[1]));
          },
          std::nullopt};
    }

    const double t0 = params.cap_height;
    ImplicitManifold cap(alg, 2, [frame](const Multivector&) { return Blade(frame.omega); });
    cap.constraints.push_back([frame, t0](const Multivector& x) { return frame.height(x) - t0; });
    if (alg.dim() > 3) cap.constraints.push_back([I3](const Multivector& x) { return outer_product(I3, x).norm(); });
    cap.domain = [frame, r](const Multivector& x) { return frame.radius_squared(x) < r * r; };
    cap.retraction = [frame, t0](const Multivector& x) { return frame.in_plane(x) + frame.axis * t0; };
    return AntiderivativeEntry{
        "cylinder-cap",
        "F(x) = p_w(x)^2 / 2 + p_w(x) r_w(x) / 2",
        "cylinder cap",
        std::move(cap),
        VectorField(alg, [](const Multivector& x) { return x; }),
        VectorField(alg,
                    [frame](const Multivector& x) {
                      const Multivector p = frame.in_plane(x);
                      return (p * p) * 0.5 + p * frame.rejection(x) * 0.5;
                    }),
        [frame, x0_unit, r, t0](std::span<const double> u) {
          return frame.point(x0_unit, 0.95 * r * std::sqrt(u[1]), kTwoPi * u[0], t0);
        },
        std::nullopt};
  }
  throw std::invalid_argument("unknown scenario entry '" + std::string(name) + "'");
}

std::vector<double> quasi_random_point(int dim, std::uint64_t index) {
  boost::random::sobol engine(static_cast<std::size_t>(dim));
  engine.seed(index);
  std::vector<double> u(static_cast<std::size_t>(dim));
  for (double& v : u) v = static_cast<double>(engine()) * 0x1p-64;
  return u;
}

DerivativeCheck check_entry(const AntiderivativeEntry& entry, const CheckOptions& options) {
  DerivativeCheck check;
  const Multivector gauge = options.gauge.value_or(Multivector(entry.manifold.ambient));
  const VectorField& base = entry.antiderivative;
  const VectorField shifted(entry.manifold.ambient, [&base, gauge](const Multivector& x) { return base(x) + gauge; });
  const VectorField& field = options.gauge ? shifted : base;

  const std::size_t budget = 10 * options.points + 10;
  for (std::uint64_t i = 1; check.points < options.points && i <= budget; ++i) {
    const std::vector<double> u = quasi_random_point(entry.manifold.dim, options.seed + i);
    const Multivector x = entry.sampler(u);
    if (entry.branch && entry.branch->near_cut && entry.branch->near_cut(x)) {
      ++check.skipped;
      continue;
    }
    const Multivector expected = entry.integrand(x);
    DerivativeOptions deriv;
    deriv.order = 4;
    const Multivector got = vector_derivative(field, entry.manifold, x, deriv);
    const double residual = (got - expected).norm() / std::max(1.0, expected.norm());
    check.max_residual = std::max(check.max_residual, residual);
    ++check.points;
  }
  check.passed = check.points == options.points && check.max_residual <= options.tolerance;
  return check;
}

}  // namespace gcint
