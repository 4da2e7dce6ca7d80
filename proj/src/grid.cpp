#include "imexllg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <string>

#include "imexllg/error.hpp"
#include "imexllg/parallel.hpp"

namespace llg {

namespace {

bool worth_parallel(const GridSpec& g) {
  return g.interior_size() >= parallel::kMinParallelCells;
}

// Sums per-line partials in line order so the result does not depend on the
// number of threads.
template <typename LineFn>
double line_reduce(const GridSpec& g, LineFn&& fn) {
  const int lines = g.line_count();
  std::vector<double> partial(lines, 0.0);
#pragma omp parallel for schedule(static) if (worth_parallel(g))
  for (int l = 0; l < lines; ++l) {
    const auto [j, k] = g.line(l);
    partial[l] = fn(j, k);
  }
  return std::accumulate(partial.begin(), partial.end(), 0.0);
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* op) {
  if (!(a == b)) {
    throw DimensionError(std::string(op) + ": fields live on different grids");
  }
}

}  // namespace

GridSpec::GridSpec(int dim, int n) : dim_(dim), n_(n) {
  if (dim != 1 && dim != 3) {
    throw DimensionError("grid dimension must be 1 or 3, got " +
                         std::to_string(dim));
  }
  if (n < 2) {
    throw DimensionError("grid needs at least 2 cells per axis, got " +
                         std::to_string(n));
  }
  h_ = 1.0 / n;
  volume_ = std::pow(h_, dim);
  const std::size_t e = static_cast<std::size_t>(n) + 2;
  if (dim == 3) {
    sy_ = e;
    sz_ = e * e;
    padded_ = e * e * e;
    interior_ = static_cast<std::size_t>(n) * n * n;
  } else {
    padded_ = e;
    interior_ = static_cast<std::size_t>(n);
  }
}

VectorField::VectorField(const GridSpec& grid)
    : grid_(grid), stride_(grid.padded_size()), data_(3 * stride_, 0.0) {}

VectorField::VectorField(const GridSpec& grid, const Vec3& value)
    : VectorField(grid) {
  for (int c = 0; c < 3; ++c) {
    auto comp = component(c);
    std::fill(comp.begin(), comp.end(), value[c]);
  }
}

Vec3 VectorField::cell(int i, int j, int k) const noexcept {
  const std::size_t idx = grid_.index(i, j, k);
  return {data_[idx], data_[stride_ + idx], data_[2 * stride_ + idx]};
}

void VectorField::set_cell(const Vec3& v, int i, int j, int k) noexcept {
  const std::size_t idx = grid_.index(i, j, k);
  data_[idx] = v[0];
  data_[stride_ + idx] = v[1];
  data_[2 * stride_ + idx] = v[2];
}

VectorField& VectorField::axpy(double a, const VectorField& x) {
  require_same_grid(grid_, x.grid_, "axpy");
  const std::size_t n = data_.size();
  double* y = data_.data();
  const double* xs = x.data_.data();
#pragma omp parallel for schedule(static) if (n >= 3 * parallel::kMinParallelCells)
  for (std::size_t i = 0; i < n; ++i) y[i] += a * xs[i];
  return *this;
}

VectorField& VectorField::scale(double a) noexcept {
  for (double& v : data_) v *= a;
  return *this;
}

void VectorField::assign(const VectorField& other) {
  require_same_grid(grid_, other.grid_, "assign");
  std::copy(other.data_.begin(), other.data_.end(), data_.begin());
}

bool VectorField::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

ScalarField::ScalarField(const GridSpec& grid)
    : grid_(grid), data_(grid.interior_size(), 0.0) {}

std::size_t ScalarField::offset(int i, int j, int k) const noexcept {
  const std::size_t n = grid_.n();
  if (grid_.dim() == 1) return static_cast<std::size_t>(i - 1);
  return static_cast<std::size_t>(i - 1) +
         n * (static_cast<std::size_t>(j - 1) +
              n * static_cast<std::size_t>(k - 1));
}

VectorField sample(const GridSpec& grid,
                   const std::function<Vec3(const Vec3&)>& fn) {
  VectorField out(grid);
  for (int k = grid.first(2); k <= grid.last(2); ++k)
    for (int j = grid.first(1); j <= grid.last(1); ++j)
      for (int i = 1; i <= grid.n(); ++i)
        out.set_cell(fn(grid.center(i, j, k)), i, j, k);
  fill_ghosts(out);
  return out;
}

void fill_ghosts(VectorField& field) {
  const GridSpec& g = field.grid();
  const int n = g.n();
  for (int c = 0; c < 3; ++c) {
    double* u = field.component(c).data();
    if (g.dim() == 1) {
      u[0] = u[1];
      u[n + 1] = u[n];
      continue;
    }
    const std::size_t sy = g.stride(1);
    const std::size_t sz = g.stride(2);
    // x faces over interior (j, k)
    for (int k = 1; k <= n; ++k)
      for (int j = 1; j <= n; ++j) {
        const std::size_t base = g.index(0, j, k);
        u[base] = u[base + 1];
        u[base + n + 1] = u[base + n];
      }
    // y faces, full x range so x-ghost edges are carried along
    for (int k = 1; k <= n; ++k)
      for (int i = 0; i <= n + 1; ++i) {
        const std::size_t base = g.index(i, 0, k);
        u[base] = u[base + sy];
        u[base + (n + 1) * sy] = u[base + n * sy];
      }
    // z faces, full (i, j) planes
    for (int j = 0; j <= n + 1; ++j)
      for (int i = 0; i <= n + 1; ++i) {
        const std::size_t base = g.index(i, j, 0);
        u[base] = u[base + sz];
        u[base + (n + 1) * sz] = u[base + n * sz];
      }
  }
}

void laplacian(const VectorField& in, VectorField& out) {
  require_same_grid(in.grid(), out.grid(), "laplacian");
  const GridSpec& g = in.grid();
  const int n = g.n();
  const int lines = g.line_count();
  const double inv_h2 = 1.0 / (g.h() * g.h());
  const std::size_t sy = g.stride(1);
  const std::size_t sz = g.stride(2);
  const bool three_d = g.dim() == 3;
  for (int c = 0; c < 3; ++c) {
    const double* u = in.component(c).data();
    double* r = out.component(c).data();
#pragma omp parallel for schedule(static) if (worth_parallel(g))
    for (int l = 0; l < lines; ++l) {
      const auto [j, k] = g.line(l);
      const std::size_t base = g.index(0, j, k);
      for (int i = 1; i <= n; ++i) {
        const std::size_t p = base + i;
        double acc = u[p + 1] + u[p - 1] - 2.0 * u[p];
        if (three_d) {
          acc += u[p + sy] + u[p - sy] + u[p + sz] + u[p - sz] - 4.0 * u[p];
        }
        r[p] = acc * inv_h2;
      }
    }
  }
  fill_ghosts(out);
}

VectorField laplacian(const VectorField& in) {
  VectorField out(in.grid());
  laplacian(in, out);
  return out;
}

ScalarField avg_gradient_sq(const VectorField& field) {
  const GridSpec& g = field.grid();
  ScalarField out(g);
  const int n = g.n();
  const int lines = g.line_count();
  const double inv = 1.0 / (4.0 * g.h() * g.h());
  const int dim = g.dim();
  const std::size_t stride[3] = {1, g.stride(1), g.stride(2)};
#pragma omp parallel for schedule(static) if (worth_parallel(g))
  for (int l = 0; l < lines; ++l) {
    const auto [j, k] = g.line(l);
    const std::size_t base = g.index(0, j, k);
    for (int i = 1; i <= n; ++i) {
      const std::size_t p = base + i;
      double acc = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double* u = field.component(c).data();
        for (int a = 0; a < dim; ++a) {
          const double d = u[p + stride[a]] - u[p - stride[a]];
          acc += d * d;
        }
      }
      out(i, j, k) = acc * inv;
    }
  }
  return out;
}

double inner(const VectorField& f, const VectorField& g_) {
  require_same_grid(f.grid(), g_.grid(), "inner");
  const GridSpec& g = f.grid();
  const int n = g.n();
  const double sum = line_reduce(g, [&](int j, int k) {
    const std::size_t base = g.index(0, j, k);
    double acc = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double* a = f.component(c).data();
      const double* b = g_.component(c).data();
      for (int i = 1; i <= n; ++i) acc += a[base + i] * b[base + i];
    }
    return acc;
  });
  return g.cell_volume() * sum;
}

double grad_inner(const VectorField& f, const VectorField& g_) {
  require_same_grid(f.grid(), g_.grid(), "grad_inner");
  const GridSpec& g = f.grid();
  const int n = g.n();
  const int dim = g.dim();
  const double sum = line_reduce(g, [&](int j, int k) {
    const std::size_t base = g.index(0, j, k);
    double acc = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double* a = f.component(c).data();
      const double* b = g_.component(c).data();
      // x links i -> i+1 along this line
      for (int i = 1; i < n; ++i) {
        const std::size_t p = base + i;
        acc += (a[p + 1] - a[p]) * (b[p + 1] - b[p]);
      }
      if (dim == 3) {
        const std::size_t sy = g.stride(1);
        const std::size_t sz = g.stride(2);
        for (int i = 1; i <= n; ++i) {
          const std::size_t p = base + i;
          if (j < n) acc += (a[p + sy] - a[p]) * (b[p + sy] - b[p]);
          if (k < n) acc += (a[p + sz] - a[p]) * (b[p + sz] - b[p]);
        }
      }
    }
    return acc;
  });
  return g.cell_volume() * sum / (g.h() * g.h());
}

Norms norms(const VectorField& field) {
  const GridSpec& g = field.grid();
  const int n = g.n();
  const int lines = g.line_count();
  std::vector<double> line_max(lines, 0.0);
#pragma omp parallel for schedule(static) if (worth_parallel(g))
  for (int l = 0; l < lines; ++l) {
    const auto [j, k] = g.line(l);
    const std::size_t base = g.index(0, j, k);
    double m = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double* u = field.component(c).data();
      for (int i = 1; i <= n; ++i) m = std::max(m, std::abs(u[base + i]));
    }
    line_max[l] = m;
  }
  Norms out;
  const double l2sq = inner(field, field);
  out.l2 = std::sqrt(l2sq);
  out.linf = *std::max_element(line_max.begin(), line_max.end());
  out.h1 = std::sqrt(l2sq + grad_inner(field, field));
  return out;
}

double unit_length_drift(const VectorField& field) {
  const GridSpec& g = field.grid();
  double drift = 0.0;
  for (int k = g.first(2); k <= g.last(2); ++k)
    for (int j = g.first(1); j <= g.last(1); ++j)
      for (int i = 1; i <= g.n(); ++i) {
        const Vec3 v = field.cell(i, j, k);
        drift = std::max(drift, std::abs(std::sqrt(dot(v, v)) - 1.0));
      }
  return drift;
}

VectorField cross(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "cross");
  const GridSpec& g = a.grid();
  VectorField out(g);
  const std::size_t size = g.padded_size();
  const double* a0 = a.component(0).data();
  const double* a1 = a.component(1).data();
  const double* a2 = a.component(2).data();
  const double* b0 = b.component(0).data();
  const double* b1 = b.component(1).data();
  const double* b2 = b.component(2).data();
  double* r0 = out.component(0).data();
  double* r1 = out.component(1).data();
  double* r2 = out.component(2).data();
  // Pointwise over ghosts too: the copy rule commutes with pointwise maps.
#pragma omp parallel for schedule(static) if (worth_parallel(g))
  for (std::size_t p = 0; p < size; ++p) {
    r0[p] = a1[p] * b2[p] - a2[p] * b1[p];
    r1[p] = a2[p] * b0[p] - a0[p] * b2[p];
    r2[p] = a0[p] * b1[p] - a1[p] * b0[p];
  }
  return out;
}

void write_snapshot_csv(std::ostream& os, const VectorField& field) {
  const GridSpec& g = field.grid();
  const auto old_precision = os.precision(17);
  if (g.dim() == 1) {
    os << "i,x,m1,m2,m3\n";
  } else {
    os << "i,j,k,x,y,z,m1,m2,m3\n";
  }
  for (int k = g.first(2); k <= g.last(2); ++k)
    for (int j = g.first(1); j <= g.last(1); ++j)
      for (int i = 1; i <= g.n(); ++i) {
        const Vec3 x = g.center(i, j, k);
        const Vec3 m = field.cell(i, j, k);
        if (g.dim() == 1) {
          os << i << ',' << x[0];
        } else {
          os << i << ',' << j << ',' << k << ',' << x[0] << ',' << x[1] << ','
             << x[2];
        }
        os << ',' << m[0] << ',' << m[1] << ',' << m[2] << '\n';
      }
  os.precision(old_precision);
}

}  // namespace llg
