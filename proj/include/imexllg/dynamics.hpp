#pragma once

#include <functional>
#include <string>

#include "imexllg/grid.hpp"

namespace llg {

enum class Variant {
  FullLL,         // gyromagnetic + damping, cross-product form
  DampingOnly,    // damping only, |m| = 1 reformulation with beta = alpha eps
  PureDiffusion,  // N = 0: only the implicit diffusion remains
};

std::string to_string(Variant v);
/// Accepts "full", "damping", "diffusion". Throws InputError.
Variant parse_variant(const std::string& name);

/// Vector-valued callback of (t, cell-center position). Called from inside
/// parallel cell loops, so it must be safe to call concurrently.
using SpaceTimeField = std::function<Vec3(double t, const Vec3& x)>;

/// Parameters of the split right-hand side m_t = N(t, m) + L(t, m).
struct ModelConfig {
  double alpha = 0.01;
  double beta = 3.0;
  double epsilon = 1.0;
  Variant variant = Variant::FullLL;
  /// Lower-order field f (anisotropy, applied field, ...). Enters the
  /// precession and damping terms alongside eps Delta m.
  SpaceTimeField field;
  /// Additive source, e.g. a manufactured forcing, added to N as is.
  SpaceTimeField source;

  /// Throws InputError unless alpha, beta, epsilon are finite and positive.
  void validate() const;
};

/// L(m) = beta Delta_h m. `m` must have its ghosts filled.
void linear_part(const ModelConfig& cfg, const VectorField& m, VectorField& out);
VectorField linear_part(const ModelConfig& cfg, const VectorField& m);

/// Explicit part N(t, m):
///   FullLL:        -m x H - alpha m x (m x H) - beta Delta_h m,  H = eps Delta_h m + f
///   DampingOnly:   beta |A_h grad_h m|^2 m - alpha m x (m x f)
///   PureDiffusion: 0
/// plus the additive source. `m` must have its ghosts filled; the result has
/// its ghosts filled. `lap` is scratch space on the same grid.
void nonlinear_part(const ModelConfig& cfg, const VectorField& m, double t, VectorField& out,
                    VectorField& lap);
VectorField nonlinear_part(const ModelConfig& cfg, const VectorField& m, double t);

}  // namespace llg
