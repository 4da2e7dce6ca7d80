#pragma once

#include <cmath>

#include "imexllg/dynamics.hpp"

// Classical RK4 on the method-of-lines system m' = N(t, m) + L(m) with many
// small substeps; resolves the time evolution of the spatially discrete
// problem far below the errors of the scheme under test.
namespace semidiscrete {

inline llg::VectorField rate(const llg::ModelConfig& cfg, const llg::VectorField& m, double t) {
  llg::VectorField r = llg::nonlinear_part(cfg, m, t);
  r.axpy(1.0, llg::linear_part(cfg, m));
  return r;
}

inline llg::VectorField advance(const llg::ModelConfig& cfg, llg::VectorField m, double t0,
                                double k, double max_dt) {
  const long substeps = static_cast<long>(std::ceil(k / max_dt));
  const double dt = k / static_cast<double>(substeps);
  for (long s = 0; s < substeps; ++s) {
    const double t = t0 + static_cast<double>(s) * dt;
    const llg::VectorField k1 = rate(cfg, m, t);
    llg::VectorField y = m;
    y.axpy(0.5 * dt, k1);
    const llg::VectorField k2 = rate(cfg, y, t + 0.5 * dt);
    y = m;
    y.axpy(0.5 * dt, k2);
    const llg::VectorField k3 = rate(cfg, y, t + 0.5 * dt);
    y = m;
    y.axpy(dt, k3);
    const llg::VectorField k4 = rate(cfg, y, t + dt);
    m.axpy(dt / 6.0, k1).axpy(dt / 3.0, k2).axpy(dt / 3.0, k3).axpy(dt / 6.0, k4);
  }
  return m;
}

}  // namespace semidiscrete
