#include "imexllg/integrator.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "imexllg/error.hpp"

namespace llg {

void RunConfig::validate() const {
  model.validate();
  if (!std::isfinite(k) || !(k > 0.0)) throw InputError("time step k must be positive");
  if (!std::isfinite(t_final) || !(t_final > 0.0)) {
    throw InputError("t_final must be positive");
  }
  if (diagnostics_every < 0) throw InputError("diagnostics_every must be >= 0");
  if (steps() < 1) throw InputError("number of steps >= 1 violated (t_final < k)");

  const StructureReport report = validate_structure(tableau);
  if (!report.passed()) throw InvalidTableau("tableau rejected: " + report.failures());
  const StabilityMargins m = stability_margins(tableau);
  if (!m.admissible()) {
    throw InvalidTableau("tableau rejected: stability margins not all positive (" +
                         std::to_string(m.m2) + ", " + std::to_string(m.m3) + ", " +
                         std::to_string(m.m4) + ")");
  }
}

long RunConfig::steps() const {
  const double ratio = t_final / k;
  double whole = std::floor(ratio);
  if (ratio - whole > 1.0 - 1e-9 * std::max(1.0, ratio)) whole += 1.0;
  return static_cast<long>(whole);
}

ImexStepper::ImexStepper(RunConfig cfg)
    : cfg_(std::move(cfg)), rhs_(cfg_.grid), scratch_(cfg_.grid) {
  cfg_.validate();
  const ImexTableau& t = cfg_.tableau;
  const int s = t.s;
  systems_.resize(s);
  for (int i = 1; i < s; ++i) {
    systems_[i].emplace(cfg_.grid, t.a_implicit(i, i) * cfg_.model.beta * cfg_.k);
  }
  needs_implicit_.assign(s, false);
  for (int j = 0; j < s; ++j) {
    for (int i = j + 1; i < s; ++i) needs_implicit_[j] = needs_implicit_[j] || t.a_implicit(i, j) != 0.0;
    needs_implicit_[j] = needs_implicit_[j] || t.b[j] != t.a_implicit(s - 1, j);
  }
  for (int i = 0; i < s; ++i) {
    stage_.emplace_back(cfg_.grid);
    explicit_.emplace_back(cfg_.grid);
    implicit_.emplace_back(cfg_.grid);
  }
}

void ImexStepper::step(VectorField& m, double t_n, long step_index,
                       const StageObserver& observer) {
  if (!(m.grid() == cfg_.grid)) throw DimensionError("step: field is not on the run grid");
  const ImexTableau& t = cfg_.tableau;
  const ModelConfig& model = cfg_.model;
  const int s = t.s;
  const double k = cfg_.k;

  auto diverged = [&](int stage, const char* what) {
    return DivergenceError("non-finite " + std::string(what) + " at step " +
                               std::to_string(step_index) + ", stage " +
                               std::to_string(stage + 1),
                           step_index, stage + 1);
  };

  stage_[0].assign(m);
  for (int i = 0; i < s; ++i) {
    if (i > 0) {
      rhs_.assign(stage_[0]);
      for (int j = 0; j < i; ++j) {
        if (t.a_explicit(i, j) != 0.0) rhs_.axpy(k * t.a_explicit(i, j), explicit_[j]);
        if (t.a_implicit(i, j) != 0.0) rhs_.axpy(t.a_implicit(i, j), implicit_[j]);
      }
      if (!rhs_.all_finite()) throw diverged(i, "stage right-hand side");
      systems_[i]->solve(rhs_, stage_[i]);
      // k L(X_i) from the stage equation itself: X_i - rhs_i = a_ii k L(X_i).
      implicit_[i].assign(stage_[i]);
      implicit_[i].axpy(-1.0, rhs_);
      implicit_[i].scale(1.0 / t.a_implicit(i, i));
    } else if (needs_implicit_[0]) {
      linear_part(model, stage_[0], implicit_[0]);
      implicit_[0].scale(k);
    }
    if (!stage_[i].all_finite()) throw diverged(i, "stage value");
    if (observer) observer(i, stage_[i]);
    nonlinear_part(model, stage_[i], t_n + t.c_tilde[i] * k, explicit_[i], scratch_);
    if (!explicit_[i].all_finite()) throw diverged(i, "explicit term");
  }

  // Update relative to the last stage:
  // m_{n+1} = X_s + k sum_j (b~_j - a~_sj) N_j + sum_j (b_j - a_sj) k L_j.
  m.assign(stage_[s - 1]);
  for (int j = 0; j < s; ++j) {
    const double we = t.b_tilde[j] - t.a_explicit(s - 1, j);
    const double wi = t.b[j] - t.a_implicit(s - 1, j);
    if (we != 0.0) m.axpy(k * we, explicit_[j]);
    if (wi != 0.0) m.axpy(wi, implicit_[j]);
  }
  if (!m.all_finite()) throw diverged(s - 1, "step result");
}

VectorField imex_rk_step(const RunConfig& cfg, const VectorField& m_n, double t_n) {
  ImexStepper stepper(cfg);
  VectorField m = m_n;
  fill_ghosts(m);
  stepper.step(m, t_n);
  return m;
}

StepDiagnostics diagnose(const VectorField& m, long step, double t) {
  const Norms nm = norms(m);
  return {step, t, nm.l2, nm.h1, unit_length_drift(m)};
}

RunResult integrate(const RunConfig& cfg, const VectorField& m0) {
  if (!(m0.grid() == cfg.grid)) throw DimensionError("integrate: initial field is not on the run grid");
  ImexStepper stepper(cfg);
  const long steps = cfg.steps();
  RunResult result{m0, 0.0, {}};
  VectorField& m = result.final_state;
  fill_ghosts(m);
  const int every = cfg.diagnostics_every;
  if (every > 0) result.diagnostics.push_back(diagnose(m, 0, 0.0));
  for (long n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * cfg.k;
    stepper.step(m, t, n + 1);
    if (every > 0 && (n + 1) % every == 0) {
      result.diagnostics.push_back(diagnose(m, n + 1, static_cast<double>(n + 1) * cfg.k));
    }
  }
  result.t_final = static_cast<double>(steps) * cfg.k;
  return result;
}

void write_diagnostics_csv(std::ostream& os, const std::vector<StepDiagnostics>& rows) {
  const auto old = os.precision(17);
  os << "step,t,l2,h1,unit_drift\n";
  for (const auto& r : rows) {
    os << r.step << ',' << r.t << ',' << r.l2 << ',' << r.h1 << ',' << r.unit_drift << '\n';
  }
  os.precision(old);
}

}  // namespace llg
