#pragma once

#include <Eigen/Dense>

#include "imexllg/grid.hpp"

// Dense (I - sigma Delta_h) assembled cell by cell from the 3/7-point stencil
// with mirrored ghosts: a missing neighbour removes its link entirely.
namespace oracle {

inline Eigen::MatrixXd helmholtz_matrix(const llg::GridSpec& g, double sigma) {
  const int n = g.n();
  const int dim = g.dim();
  const int cells = static_cast<int>(g.interior_size());
  const double w = sigma / (g.h() * g.h());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(cells, cells);
  auto id = [&](int i, int j, int k) { return i + n * (j + n * k); };
  for (int k = 0; k < (dim == 3 ? n : 1); ++k)
    for (int j = 0; j < (dim == 3 ? n : 1); ++j)
      for (int i = 0; i < n; ++i) {
        const int p = id(i, j, k);
        for (int axis = 0; axis < dim; ++axis)
          for (int step : {-1, 1}) {
            int q[3] = {i, j, k};
            q[axis] += step;
            if (q[axis] < 0 || q[axis] >= n) continue;
            a(p, p) += w;
            a(p, id(q[0], q[1], q[2])) -= w;
          }
      }
  return a;
}

inline llg::VectorField dense_solve(const llg::GridSpec& g, double sigma,
                                    const llg::VectorField& rhs) {
  const int n = g.n();
  const int cells = static_cast<int>(g.interior_size());
  Eigen::MatrixXd b(cells, 3);
  for (int c = 0; c < 3; ++c)
    for (int k = g.first(2); k <= g.last(2); ++k)
      for (int j = g.first(1); j <= g.last(1); ++j)
        for (int i = 1; i <= n; ++i) {
          const int p = g.dim() == 1 ? i - 1 : (i - 1) + n * ((j - 1) + n * (k - 1));
          b(p, c) = rhs(c, i, j, k);
        }
  const Eigen::MatrixXd x = helmholtz_matrix(g, sigma).partialPivLu().solve(b);
  llg::VectorField u(g);
  for (int c = 0; c < 3; ++c)
    for (int k = g.first(2); k <= g.last(2); ++k)
      for (int j = g.first(1); j <= g.last(1); ++j)
        for (int i = 1; i <= n; ++i) {
          const int p = g.dim() == 1 ? i - 1 : (i - 1) + n * ((j - 1) + n * (k - 1));
          u(c, i, j, k) = x(p, c);
        }
  llg::fill_ghosts(u);
  return u;
}

}  // namespace oracle
