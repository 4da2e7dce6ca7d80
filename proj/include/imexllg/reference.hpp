#pragma once

#include "imexllg/dynamics.hpp"
#include "imexllg/grid.hpp"

// Serial cell-by-cell versions of the grid and model kernels. They use only
// the element accessors, no raw strides and no OpenMP, and serve as the
// baseline for equivalence tests and benchmarks.
namespace llg::reference {

void laplacian(const VectorField& in, VectorField& out);
ScalarField avg_gradient_sq(const VectorField& field);
double inner(const VectorField& f, const VectorField& g);
double grad_inner(const VectorField& f, const VectorField& g);
Norms norms(const VectorField& field);
void nonlinear_part(const ModelConfig& cfg, const VectorField& m, double t, VectorField& out);

}  // namespace llg::reference
