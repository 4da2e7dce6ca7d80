#include "imexllg/dynamics.hpp"

#include <cmath>

#include "imexllg/error.hpp"
#include "imexllg/parallel.hpp"

namespace llg {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::FullLL: return "full";
    case Variant::DampingOnly: return "damping";
    case Variant::PureDiffusion: return "diffusion";
  }
  return "unknown";
}

Variant parse_variant(const std::string& name) {
  if (name == "full") return Variant::FullLL;
  if (name == "damping") return Variant::DampingOnly;
  if (name == "diffusion") return Variant::PureDiffusion;
  throw InputError("unknown model variant '" + name + "' (expected full, damping or diffusion)");
}

void ModelConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw InputError(std::string(name) + " must be finite and positive, got " +
                       std::to_string(v));
    }
  };
  positive(alpha, "alpha");
  positive(beta, "beta");
  positive(epsilon, "epsilon");
}

void linear_part(const ModelConfig& cfg, const VectorField& m, VectorField& out) {
  laplacian(m, out);
  out.scale(cfg.beta);
}

VectorField linear_part(const ModelConfig& cfg, const VectorField& m) {
  VectorField out(m.grid());
  linear_part(cfg, m, out);
  return out;
}

void nonlinear_part(const ModelConfig& cfg, const VectorField& m, double t, VectorField& out,
                    VectorField& lap) {
  const GridSpec& g = m.grid();
  const int n = g.n();
  const int lines = g.line_count();
  const bool par = g.interior_size() >= parallel::kMinParallelCells;

  if (cfg.variant == Variant::PureDiffusion) {
    out.scale(0.0);
    if (!cfg.source) return;
  } else if (cfg.variant == Variant::FullLL) {
    laplacian(m, lap);
  }

  const double inv_4h2 = 1.0 / (4.0 * g.h() * g.h());
  const std::size_t stride[3] = {1, g.stride(1), g.stride(2)};

#pragma omp parallel for schedule(static) if (par)
  for (int l = 0; l < lines; ++l) {
    const auto [j, k] = g.line(l);
    for (int i = 1; i <= n; ++i) {
      const Vec3 x = g.center(i, j, k);
      const Vec3 mi = m.cell(i, j, k);
      const Vec3 f = cfg.field ? cfg.field(t, x) : Vec3{0.0, 0.0, 0.0};
      Vec3 r{0.0, 0.0, 0.0};
      switch (cfg.variant) {
        case Variant::FullLL: {
          const Vec3 dm = lap.cell(i, j, k);
          Vec3 heff;
          for (int c = 0; c < 3; ++c) heff[c] = cfg.epsilon * dm[c] + f[c];
          const Vec3 prec = cross(mi, heff);
          const Vec3 damp = cross(mi, prec);
          for (int c = 0; c < 3; ++c) r[c] = -prec[c] - cfg.alpha * damp[c] - cfg.beta * dm[c];
          break;
        }
        case Variant::DampingOnly: {
          const std::size_t p = g.index(i, j, k);
          double grad_sq = 0.0;
          for (int c = 0; c < 3; ++c) {
            const double* u = m.component(c).data();
            for (int a = 0; a < g.dim(); ++a) {
              const double d = u[p + stride[a]] - u[p - stride[a]];
              grad_sq += d * d;
            }
          }
          grad_sq *= inv_4h2;
          const Vec3 damp = cross(mi, cross(mi, f));
          for (int c = 0; c < 3; ++c) r[c] = cfg.beta * grad_sq * mi[c] - cfg.alpha * damp[c];
          break;
        }
        case Variant::PureDiffusion:
          break;
      }
      if (cfg.source) {
        const Vec3 s = cfg.source(t, x);
        for (int c = 0; c < 3; ++c) r[c] += s[c];
      }
      out.set_cell(r, i, j, k);
    }
  }
  fill_ghosts(out);
}

VectorField nonlinear_part(const ModelConfig& cfg, const VectorField& m, double t) {
  VectorField out(m.grid());
  VectorField lap(m.grid());
  nonlinear_part(cfg, m, t, out, lap);
  return out;
}

}  // namespace llg
