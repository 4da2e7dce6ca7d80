#pragma once

#include <vector>

#include "imexllg/grid.hpp"

namespace llg {

/// The constant-coefficient stage operator (I - sigma Delta_h) with
/// homogeneous Neumann ghosts, applied componentwise.
///
/// 1-D grids are solved by tridiagonal elimination; 3-D grids are diagonalised
/// in the even-cosine basis of the cell-centered Neumann Laplacian, whose
/// eigenvalues per axis are (4/h^2) sin^2(p pi / (2n)), p = 0..n-1. Factors
/// and transforms are built once here, so a system is immutable and can be
/// shared between threads.
class StageSystem {
 public:
  /// Throws InputError unless sigma is finite and >= 0.
  StageSystem(const GridSpec& grid, double sigma);

  const GridSpec& grid() const noexcept { return grid_; }
  double sigma() const noexcept { return sigma_; }

  /// Solves (I - sigma Delta_h) u = rhs on the interior of `rhs` and fills
  /// the ghosts of `u`. Throws InputError on non-finite data.
  void solve(const VectorField& rhs, VectorField& u) const;
  VectorField solve(const VectorField& rhs) const;

  /// (I - sigma Delta_h) u; `u` must have its ghosts filled.
  void apply(const VectorField& u, VectorField& out) const;
  VectorField apply(const VectorField& u) const;

 private:
  void solve_tridiagonal(const double* rhs, double* u) const;
  void solve_cosine(const double* rhs, double* u, std::vector<double>& work) const;

  GridSpec grid_;
  double sigma_;
  // 1-D elimination: sigma/h^2 and reciprocal pivots of the forward sweep
  double coupling_ = 0.0;
  std::vector<double> inv_pivot_;
  // 3-D: orthonormal cosine basis Q[i * n + p] and 1 / (1 + sigma lambda)
  std::vector<double> basis_;
  std::vector<double> inv_symbol_;
};

}  // namespace llg
