#include "gcint/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <thread>
#include <utility>

#include "gcint/errors.hpp"

namespace gcint {

namespace {

constexpr std::size_t kBlockCells = 4096;
constexpr std::size_t kLeafCells = 8;

// Fourth-order central differences balance truncation h^4 against rounding eps/h.
// The 1/4 accounts for charts that wind a full turn over [0, 1].
double chart_step() { return 0.25 * std::pow(std::numeric_limits<double>::epsilon(), 0.2); }

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// One refinement level: fixed pairwise tree over cells, grouped into blocks
// so the reduction order does not depend on the number of workers.
class CellSum {
 public:
  CellSum(const ManifoldPatch& patch, const VectorField& f, int n) : patch_(patch), f_(f), n_(n) {
    cells_ = ipow(static_cast<std::size_t>(n), patch.dim);
    cell_volume_ = std::pow(1.0 / n, patch.dim);
  }

  std::size_t cells() const { return cells_; }

  Multivector run(int threads) const {
    const std::size_t blocks = (cells_ + kBlockCells - 1) / kBlockCells;
    std::vector<Multivector> partial(blocks, Multivector(patch_.ambient));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    auto work = [&](std::size_t worker) {
      try {
        for (std::size_t b = next++; b < blocks; b = next++) {
          const std::size_t lo = b * kBlockCells;
          partial[b] = pairwise(lo, std::min(cells_, lo + kBlockCells));
        }
      } catch (...) {
        errors[worker] = std::current_exception();
        next = blocks;
      }
    };
    const auto workers = static_cast<std::size_t>(std::max(1, std::min<int>(threads, static_cast<int>(blocks))));
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (auto& t : pool) t.join();
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    return reduce(partial, 0, partial.size());
  }

 private:
  Multivector reduce(const std::vector<Multivector>& v, std::size_t lo, std::size_t hi) const {
    if (hi - lo == 1) return v[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return reduce(v, lo, mid) + reduce(v, mid, hi);
  }

  Multivector pairwise(std::size_t lo, std::size_t hi) const {
    if (hi - lo <= kLeafCells) {
      Multivector s(patch_.ambient);
      for (std::size_t c = lo; c < hi; ++c) s += cell(c);
      return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise(lo, mid) + pairwise(mid, hi);
  }

  Multivector cell(std::size_t index) const {
    double u[Algebra::kMaxDim] = {};
    std::size_t rest = index;
    for (int k = 0; k < patch_.dim; ++k) {
      const std::size_t i = rest % static_cast<std::size_t>(n_);
      rest /= static_cast<std::size_t>(n_);
      u[k] = (static_cast<double>(i) + 0.5) / n_;
    }
    const std::span<const double> params(u, static_cast<std::size_t>(patch_.dim));
    const Multivector measure = patch_.measure(params);
    if (measure.norm() < kDegenerateMeasure) {
      if (patch_.degenerate) return Multivector(patch_.ambient);
      throw DegenerateMeasure("directed_integral: measure blade vanishes at a quadrature node of '" +
                              patch_.name + "'");
    }
    return (measure * cell_volume_) * f_(patch_.chart(params));
  }

  const ManifoldPatch& patch_;
  const VectorField& f_;
  int n_;
  std::size_t cells_ = 0;
  double cell_volume_ = 1.0;
};

Multivector evaluate(const ManifoldPatch& patch, const VectorField& f, int n, int threads) {
  if (patch.dim == 0) {
    const Multivector x = patch.chart({});
    return f(x) * static_cast<double>(patch.orientation);
  }
  return CellSum(patch, f, n).run(threads);
}

}  // namespace

ManifoldPatch::ManifoldPatch(Algebra ambient_algebra, int patch_dim, Chart patch_chart, int patch_orientation,
                             int cells_per_axis, std::string patch_name)
    : ambient(ambient_algebra),
      dim(patch_dim),
      chart(std::move(patch_chart)),
      orientation(patch_orientation),
      subdivision(cells_per_axis),
      name(std::move(patch_name)) {
  if (dim < 0 || dim > ambient.dim()) throw std::invalid_argument("patch dimension out of range");
  if (orientation != 1 && orientation != -1) throw std::invalid_argument("patch orientation must be +1 or -1");
  if (subdivision < 1) throw std::invalid_argument("patch subdivision must be positive");
  if (!chart) throw std::invalid_argument("patch needs a chart");
}

Multivector ManifoldPatch::measure(std::span<const double> u) const {
  Multivector m = Multivector::scalar(ambient, static_cast<double>(orientation));
  const double h = chart_step();
  double p[Algebra::kMaxDim] = {};
  std::copy(u.begin(), u.end(), p);
  const std::span<const double> params(p, u.size());
  for (int k = 0; k < dim; ++k) {
    const double saved = p[k];
    p[k] = saved + h;
    const Multivector plus = chart(params);
    p[k] = saved - h;
    const Multivector minus = chart(params);
    p[k] = saved + 2.0 * h;
    const Multivector plus2 = chart(params);
    p[k] = saved - 2.0 * h;
    const Multivector minus2 = chart(params);
    p[k] = saved;
    m = outer_product(m, ((plus - minus) * 8.0 - (plus2 - minus2)) / (12.0 * h));
  }
  return m;
}

DirectedIntegralResult directed_integral(const ManifoldPatch& patch, const VectorField& f,
                                         const QuadratureOptions& options) {
  if (!(patch.ambient == f.algebra())) throw AlgebraMismatch("directed_integral: field and patch algebras differ");
  const int threads = worker_count(options.threads);
  DirectedIntegralResult result{Multivector(patch.ambient)};

  if (patch.dim == 0) {
    result.value = evaluate(patch, f, 1, threads);
    result.cells = 1;
    result.subdivision = 1;
    return result;
  }

  int n = patch.subdivision;
  Multivector value = evaluate(patch, f, n, threads);
  double error = 0.0;
  if (options.tolerance > 0.0) {
    const int cap = std::max(options.max_subdivision, n);
    result.converged = false;
    while (2 * n <= cap) {
      Multivector finer = evaluate(patch, f, 2 * n, threads);
      error = (finer - value).norm();
      value = std::move(finer);
      n *= 2;
      if (error < options.tolerance) {
        result.converged = true;
        break;
      }
    }
    if (!result.converged && n == patch.subdivision) {
      // No room to refine: fall back to a coarser comparison for the estimate.
      if (n >= 2) error = (value - evaluate(patch, f, n / 2, threads)).norm();
      result.converged = error < options.tolerance;
    }
  } else if (n >= 2) {
    error = (value - evaluate(patch, f, n / 2, threads)).norm();
  }

  result.value = std::move(value);
  result.subdivision = n;
  result.cells = ipow(static_cast<std::size_t>(n), patch.dim);
  result.estimated_error = error;
  return result;
}

std::vector<ManifoldPatch> boundary_patches(const ManifoldPatch& patch) {
  if (patch.dim < 1) throw std::invalid_argument("boundary_patches: patch must have dimension >= 1");
  std::vector<ManifoldPatch> faces;
  const int m = patch.dim;
  for (int k = 0; k < m; ++k) {
    for (int side = 0; side <= 1; ++side) {
      // Moving ∂_k to the end of the wedge costs (-1)^{m-1-k}; the u_k = 0
      // face has an inward-pointing ∂_k and flips once more.
      int sign = ((m - 1 - k) % 2 == 0) ? 1 : -1;
      if (side == 0) sign = -sign;
      Chart parent = patch.chart;
      const double fixed = static_cast<double>(side);
      Chart face_chart = [parent, k, m, fixed](std::span<const double> v) {
        double u[Algebra::kMaxDim] = {};
        for (int j = 0, src = 0; j < m; ++j) u[j] = (j == k) ? fixed : v[static_cast<std::size_t>(src++)];
        return parent(std::span<const double>(u, static_cast<std::size_t>(m)));
      };
      ManifoldPatch face(patch.ambient, m - 1, std::move(face_chart), sign * patch.orientation, patch.subdivision,
                         patch.name + "/u" + std::to_string(k + 1) + "=" + std::to_string(side));
      if (m - 1 > 0) {
        const int probe = std::min(8, patch.subdivision);
        bool all_small = true;
        const std::size_t nodes = ipow(static_cast<std::size_t>(probe), m - 1);
        for (std::size_t c = 0; c < nodes && all_small; ++c) {
          double v[Algebra::kMaxDim] = {};
          std::size_t rest = c;
          for (int j = 0; j < m - 1; ++j) {
            v[j] = (static_cast<double>(rest % static_cast<std::size_t>(probe)) + 0.5) / probe;
            rest /= static_cast<std::size_t>(probe);
          }
          all_small = face.measure(std::span<const double>(v, static_cast<std::size_t>(m - 1))).norm() <
                      kDegenerateMeasure;
        }
        face.degenerate = all_small;
      }
      faces.push_back(std::move(face));
    }
  }
  return faces;
}

FundamentalTheoremCheck verify_fundamental_theorem(const ManifoldPatch& patch, const VectorField& field,
                                                   const ImplicitManifold& manifold,
                                                   const QuadratureOptions& options) {
  const VectorField derivative(field.algebra(), [&field, &manifold](const Multivector& x) {
    return vector_derivative(field, manifold, x);
  });
  QuadratureOptions fixed = options;
  fixed.tolerance = 0.0;
  FundamentalTheoremCheck check{Multivector(patch.ambient), Multivector(patch.ambient)};
  const DirectedIntegralResult interior = directed_integral(patch, derivative, fixed);
  check.interior = interior.value;
  check.cells = interior.cells;
  for (const ManifoldPatch& face : boundary_patches(patch)) {
    if (face.degenerate) continue;
    check.boundary += directed_integral(face, field, fixed).value;
  }
  check.residual = (check.interior - check.boundary).norm();
  return check;
}

int worker_count(int requested) {
  const int hw = std::max(1u, std::thread::hardware_concurrency());
  int cap = hw;
  if (const char* env = std::getenv("GCINT_THREADS"); env != nullptr) {
    int parsed = 0;
    const auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), parsed);
    if (ec == std::errc{} && parsed > 0) cap = std::min(cap, parsed);
  }
  if (requested > 0) cap = std::min(cap, requested);
  return std::max(1, cap);
}

}  // namespace gcint
