#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "imexllg/dynamics.hpp"
#include "imexllg/grid.hpp"
#include "imexllg/helmholtz.hpp"
#include "imexllg/tableau.hpp"

namespace llg {

struct RunConfig {
  GridSpec grid;
  ModelConfig model;
  ImexTableau tableau = default_tableau();
  double k = 1e-3;
  double t_final = 1.0;
  /// Record diagnostics every this many steps (and at step 0); 0 disables.
  int diagnostics_every = 0;

  /// Throws InputError / InvalidTableau when the run is not admissible:
  /// bad model parameters, k or t_final not positive, fewer than one step,
  /// tableau failing validate_structure or without positive margins.
  void validate() const;

  /// floor(t_final / k), treating ratios within 1e-9 of the next integer as
  /// that integer so that t_final = N k yields N steps despite rounding.
  long steps() const;
};

struct StepDiagnostics {
  long step = 0;
  double t = 0.0;
  double l2 = 0.0;
  double h1 = 0.0;
  double unit_drift = 0.0;
};

/// Receives every stage value of a step, stage index 0-based.
using StageObserver = std::function<void(int stage, const VectorField& value)>;

/// One IMEX Runge-Kutta step per call. Each implicit stage is a single
/// constant-coefficient solve (I - a_ii beta k Delta_h) X_i = rhs_i; the
/// off-diagonal implicit terms and all explicit terms are assembled into
/// rhs_i from earlier stages. The stage systems and work fields are built
/// once per stepper.
class ImexStepper {
 public:
  explicit ImexStepper(RunConfig cfg);

  const RunConfig& config() const noexcept { return cfg_; }

  /// Advances `m` (ghosts filled) from t_n to t_n + k in place. Throws
  /// DivergenceError with the stage index when a stage goes non-finite;
  /// `step_index` is only used for that error's context.
  void step(VectorField& m, double t_n, long step_index = 0,
            const StageObserver& observer = {});

 private:
  RunConfig cfg_;
  std::vector<std::optional<StageSystem>> systems_;
  std::vector<VectorField> stage_;    // X_i
  std::vector<VectorField> explicit_; // N(t_n + c~_i k, X_i)
  std::vector<VectorField> implicit_; // k L(X_i)
  std::vector<bool> needs_implicit_;
  VectorField rhs_;
  VectorField scratch_;
};

VectorField imex_rk_step(const RunConfig& cfg, const VectorField& m_n, double t_n);

struct RunResult {
  VectorField final_state;
  double t_final = 0.0;  // steps * k, the time actually reached
  std::vector<StepDiagnostics> diagnostics;
};

RunResult integrate(const RunConfig& cfg, const VectorField& m0);

StepDiagnostics diagnose(const VectorField& m, long step, double t);

/// CSV with header step,t,l2,h1,unit_drift, 17 significant digits.
void write_diagnostics_csv(std::ostream& os, const std::vector<StepDiagnostics>& rows);

}  // namespace llg
