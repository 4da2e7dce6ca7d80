#include "imexllg/helmholtz.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "imexllg/error.hpp"
#include "imexllg/parallel.hpp"

namespace llg {

namespace {

void check_finite_interior(const VectorField& f) {
  const GridSpec& g = f.grid();
  for (int c = 0; c < 3; ++c)
    for (int k = g.first(2); k <= g.last(2); ++k)
      for (int j = g.first(1); j <= g.last(1); ++j)
        for (int i = 1; i <= g.n(); ++i)
          if (!std::isfinite(f(c, i, j, k))) {
            throw InputError("stage solve: non-finite right-hand side at component " +
                             std::to_string(c));
          }
}

// One pass of a separable transform along `axis` of an n^3 x-fastest block:
// forward computes out_p = sum_i Q_ip in_i, inverse out_i = sum_p Q_ip in_p.
void transform_axis(const std::vector<double>& q, int n, int axis, bool forward,
                    const double* in, double* out) {
  const std::size_t nn = static_cast<std::size_t>(n);
  const std::size_t stride = axis == 0 ? 1 : (axis == 1 ? nn : nn * nn);
  const int lines = n * n;
#pragma omp parallel for schedule(static) if (nn * nn * nn >= parallel::kMinParallelCells)
  for (int l = 0; l < lines; ++l) {
    const std::size_t a = static_cast<std::size_t>(l) % nn;
    const std::size_t b = static_cast<std::size_t>(l) / nn;
    std::size_t base = 0;
    if (axis == 0) base = nn * (a + nn * b);
    else if (axis == 1) base = a + nn * nn * b;
    else base = a + nn * b;
    for (std::size_t r = 0; r < nn; ++r) {
      double acc = 0.0;
      for (std::size_t s = 0; s < nn; ++s) {
        const double coeff = forward ? q[s * nn + r] : q[r * nn + s];
        acc += coeff * in[base + s * stride];
      }
      out[base + r * stride] = acc;
    }
  }
}

}  // namespace

StageSystem::StageSystem(const GridSpec& grid, double sigma) : grid_(grid), sigma_(sigma) {
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw InputError("stage system needs a finite sigma >= 0, got " + std::to_string(sigma));
  }
  if (sigma_ == 0.0) return;
  const int n = grid.n();
  const double h = grid.h();
  if (grid.dim() == 1) {
    coupling_ = sigma / (h * h);
    inv_pivot_.resize(n);
    double pivot = 1.0 + coupling_;
    inv_pivot_[0] = 1.0 / pivot;
    for (int i = 1; i < n; ++i) {
      const double diag = (i == n - 1) ? 1.0 + coupling_ : 1.0 + 2.0 * coupling_;
      pivot = diag - coupling_ * coupling_ * inv_pivot_[i - 1];
      inv_pivot_[i] = 1.0 / pivot;
    }
    return;
  }

  const std::size_t nn = static_cast<std::size_t>(n);
  basis_.resize(nn * nn);
  std::vector<double> lambda(nn);
  for (int p = 0; p < n; ++p) {
    const double w = p == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (int i = 0; i < n; ++i) {
      basis_[static_cast<std::size_t>(i) * nn + p] =
          w * std::cos(std::numbers::pi * p * (i + 0.5) / n);
    }
    const double s = std::sin(std::numbers::pi * p / (2.0 * n));
    lambda[p] = 4.0 / (h * h) * s * s;
  }
  inv_symbol_.resize(nn * nn * nn);
  for (std::size_t r = 0; r < nn; ++r)
    for (std::size_t q = 0; q < nn; ++q)
      for (std::size_t p = 0; p < nn; ++p)
        inv_symbol_[p + nn * (q + nn * r)] = 1.0 / (1.0 + sigma * (lambda[p] + lambda[q] + lambda[r]));
}

void StageSystem::solve_tridiagonal(const double* rhs, double* u) const {
  const int n = grid_.n();
  const double s = coupling_;
  // Constants pass through unchanged, so only the zero-mean part is
  // eliminated. Elimination error scales with s times the data it acts on;
  // keeping the mean out of it leaves the mean exact for large s.
  double mean = 0.0;
  for (int i = 1; i <= n; ++i) mean += rhs[i];
  mean /= n;
  // forward sweep: u holds the eliminated right-hand side d'
  u[1] = (rhs[1] - mean) * inv_pivot_[0];
  for (int i = 2; i <= n; ++i) u[i] = (rhs[i] - mean + s * u[i - 1]) * inv_pivot_[i - 1];
  for (int i = n - 1; i >= 1; --i) u[i] += s * inv_pivot_[i - 1] * u[i + 1];
  for (int i = 1; i <= n; ++i) u[i] += mean;
}

void StageSystem::solve_cosine(const double* rhs, double* u, std::vector<double>& work) const {
  const GridSpec& g = grid_;
  const int n = g.n();
  const std::size_t nn = static_cast<std::size_t>(n);
  const std::size_t cells = nn * nn * nn;
  work.resize(2 * cells);
  double* a = work.data();
  double* b = work.data() + cells;
  // Same mean split as the tridiagonal path: constants come back bit-exact.
  double mean = 0.0;
  for (int k = 1; k <= n; ++k)
    for (int j = 1; j <= n; ++j)
      for (int i = 1; i <= n; ++i) mean += rhs[g.index(i, j, k)];
  mean /= static_cast<double>(cells);
  for (int k = 1; k <= n; ++k)
    for (int j = 1; j <= n; ++j)
      for (int i = 1; i <= n; ++i)
        a[(i - 1) + nn * ((j - 1) + nn * (k - 1))] = rhs[g.index(i, j, k)] - mean;
  transform_axis(basis_, n, 0, true, a, b);
  transform_axis(basis_, n, 1, true, b, a);
  transform_axis(basis_, n, 2, true, a, b);
  b[0] = 0.0;
  for (std::size_t p = 1; p < cells; ++p) b[p] *= inv_symbol_[p];
  transform_axis(basis_, n, 2, false, b, a);
  transform_axis(basis_, n, 1, false, a, b);
  transform_axis(basis_, n, 0, false, b, a);
  for (int k = 1; k <= n; ++k)
    for (int j = 1; j <= n; ++j)
      for (int i = 1; i <= n; ++i)
        u[g.index(i, j, k)] = a[(i - 1) + nn * ((j - 1) + nn * (k - 1))] + mean;
}

void StageSystem::solve(const VectorField& rhs, VectorField& u) const {
  if (!(rhs.grid() == grid_) || !(u.grid() == grid_)) {
    throw DimensionError("stage solve: field grid does not match the system");
  }
  check_finite_interior(rhs);
  if (sigma_ == 0.0) {
    if (&u != &rhs) u.assign(rhs);
    fill_ghosts(u);
    return;
  }
  std::vector<double> work;
  for (int c = 0; c < 3; ++c) {
    const double* r = rhs.component(c).data();
    double* x = u.component(c).data();
    if (grid_.dim() == 1) {
      solve_tridiagonal(r, x);
    } else {
      solve_cosine(r, x, work);
    }
  }
  fill_ghosts(u);
}

VectorField StageSystem::solve(const VectorField& rhs) const {
  VectorField u(grid_);
  solve(rhs, u);
  return u;
}

void StageSystem::apply(const VectorField& u, VectorField& out) const {
  laplacian(u, out);
  out.scale(-sigma_);
  out.axpy(1.0, u);
}

VectorField StageSystem::apply(const VectorField& u) const {
  VectorField out(grid_);
  apply(u, out);
  return out;
}

}  // namespace llg
