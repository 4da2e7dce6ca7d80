#include "imexllg/reference.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "imexllg/error.hpp"

namespace llg::reference {

namespace {

template <typename Fn>
void for_interior(const GridSpec& g, Fn&& fn) {
  for (int k = g.first(2); k <= g.last(2); ++k)
    for (int j = g.first(1); j <= g.last(1); ++j)
      for (int i = 1; i <= g.n(); ++i) fn(i, j, k);
}

std::array<int, 3> shifted(int i, int j, int k, int axis, int by) {
  std::array<int, 3> idx{i, j, k};
  idx[axis] += by;
  return idx;
}

double at(const VectorField& f, int c, const std::array<int, 3>& idx) {
  return f(c, idx[0], idx[1], idx[2]);
}

}  // namespace

void laplacian(const VectorField& in, VectorField& out) {
  const GridSpec& g = in.grid();
  if (!(g == out.grid())) throw DimensionError("laplacian: grid mismatch");
  const double inv_h2 = 1.0 / (g.h() * g.h());
  for_interior(g, [&](int i, int j, int k) {
    for (int c = 0; c < 3; ++c) {
      double acc = 0.0;
      for (int a = 0; a < g.dim(); ++a) {
        acc += at(in, c, shifted(i, j, k, a, 1)) + at(in, c, shifted(i, j, k, a, -1)) -
               2.0 * in(c, i, j, k);
      }
      out(c, i, j, k) = acc * inv_h2;
    }
  });
  fill_ghosts(out);
}

ScalarField avg_gradient_sq(const VectorField& field) {
  const GridSpec& g = field.grid();
  ScalarField out(g);
  for_interior(g, [&](int i, int j, int k) {
    double acc = 0.0;
    for (int c = 0; c < 3; ++c)
      for (int a = 0; a < g.dim(); ++a) {
        const double d = (at(field, c, shifted(i, j, k, a, 1)) -
                          at(field, c, shifted(i, j, k, a, -1))) /
                         (2.0 * g.h());
        acc += d * d;
      }
    out(i, j, k) = acc;
  });
  return out;
}

double inner(const VectorField& f, const VectorField& g_) {
  const GridSpec& g = f.grid();
  double acc = 0.0;
  for_interior(g, [&](int i, int j, int k) {
    acc += dot(f.cell(i, j, k), g_.cell(i, j, k));
  });
  return g.cell_volume() * acc;
}

double grad_inner(const VectorField& f, const VectorField& g_) {
  const GridSpec& g = f.grid();
  double acc = 0.0;
  for_interior(g, [&](int i, int j, int k) {
    const std::array<int, 3> here{i, j, k};
    for (int a = 0; a < g.dim(); ++a) {
      if (here[a] == g.n()) continue;
      const auto next = shifted(i, j, k, a, 1);
      for (int c = 0; c < 3; ++c) {
        acc += (at(f, c, next) - f(c, i, j, k)) * (at(g_, c, next) - g_(c, i, j, k));
      }
    }
  });
  return g.cell_volume() * acc / (g.h() * g.h());
}

Norms norms(const VectorField& field) {
  const GridSpec& g = field.grid();
  Norms out;
  for_interior(g, [&](int i, int j, int k) {
    for (int c = 0; c < 3; ++c) out.linf = std::max(out.linf, std::abs(field(c, i, j, k)));
  });
  const double l2sq = reference::inner(field, field);
  out.l2 = std::sqrt(l2sq);
  out.h1 = std::sqrt(l2sq + reference::grad_inner(field, field));
  return out;
}

void nonlinear_part(const ModelConfig& cfg, const VectorField& m, double t, VectorField& out) {
  const GridSpec& g = m.grid();
  VectorField lap(g);
  reference::laplacian(m, lap);
  const ScalarField grad_sq = reference::avg_gradient_sq(m);
  for_interior(g, [&](int i, int j, int k) {
    const Vec3 x = g.center(i, j, k);
    const Vec3 mi = m.cell(i, j, k);
    const Vec3 f = cfg.field ? cfg.field(t, x) : Vec3{0.0, 0.0, 0.0};
    Vec3 r{0.0, 0.0, 0.0};
    if (cfg.variant == Variant::FullLL) {
      const Vec3 dm = lap.cell(i, j, k);
      Vec3 heff;
      for (int c = 0; c < 3; ++c) heff[c] = cfg.epsilon * dm[c] + f[c];
      const Vec3 prec = cross(mi, heff);
      const Vec3 damp = cross(mi, prec);
      for (int c = 0; c < 3; ++c) r[c] = -prec[c] - cfg.alpha * damp[c] - cfg.beta * dm[c];
    } else if (cfg.variant == Variant::DampingOnly) {
      const Vec3 damp = cross(mi, cross(mi, f));
      for (int c = 0; c < 3; ++c) r[c] = cfg.beta * grad_sq(i, j, k) * mi[c] - cfg.alpha * damp[c];
    }
    if (cfg.source) {
      const Vec3 s = cfg.source(t, x);
      for (int c = 0; c < 3; ++c) r[c] += s[c];
    }
    out.set_cell(r, i, j, k);
  });
  fill_ghosts(out);
}

}  // namespace llg::reference
