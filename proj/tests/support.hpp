#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "imexllg/grid.hpp"

namespace testing {

// Interior components uniform in [lo, hi], ghosts filled.
inline llg::VectorField random_field(const llg::GridSpec& g, std::uint64_t seed, double lo = -1.0,
                                     double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  llg::VectorField f(g);
  for (int c = 0; c < 3; ++c)
    for (int k = g.first(2); k <= g.last(2); ++k)
      for (int j = g.first(1); j <= g.last(1); ++j)
        for (int i = 1; i <= g.n(); ++i) f(c, i, j, k) = u(rng);
  llg::fill_ghosts(f);
  return f;
}

// Random unit vectors per cell.
inline llg::VectorField random_unit_field(const llg::GridSpec& g, std::uint64_t seed) {
  llg::VectorField f = random_field(g, seed);
  for (int k = g.first(2); k <= g.last(2); ++k)
    for (int j = g.first(1); j <= g.last(1); ++j)
      for (int i = 1; i <= g.n(); ++i) {
        llg::Vec3 v = f.cell(i, j, k);
        const double len = std::sqrt(llg::dot(v, v));
        for (double& x : v) x /= len;
        f.set_cell(v, i, j, k);
      }
  llg::fill_ghosts(f);
  return f;
}

// Largest interior difference over all components.
inline double max_interior_diff(const llg::VectorField& a, const llg::VectorField& b) {
  const llg::GridSpec& g = a.grid();
  double m = 0.0;
  for (int c = 0; c < 3; ++c)
    for (int k = g.first(2); k <= g.last(2); ++k)
      for (int j = g.first(1); j <= g.last(1); ++j)
        for (int i = 1; i <= g.n(); ++i) m = std::max(m, std::abs(a(c, i, j, k) - b(c, i, j, k)));
  return m;
}

inline double max_interior_abs(const llg::VectorField& a) {
  return max_interior_diff(a, llg::VectorField(a.grid()));
}

// Plain interior l2 difference norm, relative to |b|.
inline double rel_l2_diff(const llg::VectorField& a, const llg::VectorField& b) {
  llg::VectorField d = a;
  d.axpy(-1.0, b);
  return std::sqrt(llg::inner(d, d) / llg::inner(b, b));
}

}  // namespace testing
