#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "imexllg/dynamics.hpp"
#include "imexllg/grid.hpp"
#include "imexllg/tableau.hpp"

namespace llg {

/// Closed-form unit-length solution built from phi = X (1-D) or X Y Z (3-D),
/// X = x^2 (1-x)^2, together with the source that makes it an exact solution
/// of the chosen model (eps Delta m with f = 0).
struct ManufacturedCase {
  int dim = 1;
  double alpha = 0.01;
  double epsilon = 1.0;
  bool gyromagnetic = true;

  /// m_e(x, t) = (cos phi sin t, sin phi sin t, cos t).
  Vec3 exact(const Vec3& x, double t) const;
  Vec3 time_derivative(const Vec3& x, double t) const;
  /// d m_e / d x_axis.
  Vec3 derivative(int axis, const Vec3& x, double t) const;
  Vec3 laplacian(const Vec3& x, double t) const;
  /// |grad m_e|^2 = sin^2 t |grad phi|^2.
  double gradient_sq(const Vec3& x, double t) const;
  /// f_e = d_t m - alpha eps (Delta m + |grad m|^2 m) [+ eps m x Delta m],
  /// the residual of m_t = alpha eps (Delta m + |grad m|^2 m) [- eps m x Delta m].
  Vec3 forcing(const Vec3& x, double t) const;

  /// The forcing as a SpaceTimeField for ModelConfig::source.
  SpaceTimeField source() const;
  VectorField sample(const GridSpec& grid, double t) const;
};

/// dim in {1, 3}; the gyromagnetic term is included for FullLL and left out
/// for DampingOnly. Throws InputError for other variants or dimensions.
ManufacturedCase manufactured_case(int dim, double alpha, double epsilon = 1.0,
                                   Variant variant = Variant::FullLL);

struct ErrorReport {
  double k = 0.0;
  double h = 0.0;
  double linf = 0.0;
  double l2 = 0.0;
  double h1 = 0.0;
};

/// Discrete norms of m - m_e(., t) at cell centers.
ErrorReport errors_vs_exact(const VectorField& m, const ManufacturedCase& mc, double t);

enum class Refinement { Temporal, Spatial };
std::string to_string(Refinement r);
Refinement parse_refinement(const std::string& name);

struct FittedOrders {
  double linf = 0.0;
  double l2 = 0.0;
  double h1 = 0.0;
};

struct ConvergenceTable {
  std::string id;
  int dim = 1;
  Refinement against = Refinement::Temporal;
  std::vector<ErrorReport> rows;
  FittedOrders orders;
};

/// Least-squares slope of log(error) against log(k) (temporal) or log(h)
/// (spatial) over all rows. Throws InsufficientData below three rows or when
/// the step sizes are not distinct.
FittedOrders fit_order(const std::vector<ErrorReport>& rows, Refinement against);
/// Slope of log(y) against log(x) over all points.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ScheduleRow {
  int n = 2;
  double k = 1e-3;
};

struct StudySpec {
  int dim = 1;
  Refinement refinement = Refinement::Temporal;
  double alpha = 0.01;
  double beta = 3.0;
  double epsilon = 1.0;
  Variant variant = Variant::FullLL;
  double t_final = 1.0;
  std::vector<ScheduleRow> schedule;
  /// Rows run in parallel when true; each row is an independent run.
  bool parallel_rows = true;
};

/// Coupled schedule k = coeff h^{2/3} over the given cell counts.
std::vector<ScheduleRow> coupled_schedule(const std::vector<int>& cells, double coeff);
/// Default schedules: temporal 1-D n = 6..9 with k = 1e-4 h^{2/3}, 3-D n = 2..5
/// with k = 1e-3 h^{2/3}; spatial 1-D n = 160, 240, 320, 400 at k = 1e-7,
/// 3-D n = 4..7 at k = 1e-4.
std::vector<ScheduleRow> default_schedule(int dim, Refinement refinement);
/// Default final time: 1, except 1e-2 for the 1-D spatial study.
double default_t_final(int dim, Refinement refinement);
/// Study preset with the default schedule and final time.
StudySpec default_study(int dim, Refinement refinement);

/// Runs one integration per schedule row from the exact initial data and
/// compares with the exact solution at the time reached. Errors from a row
/// are rethrown with the row's (n, k) prepended.
ConvergenceTable convergence_study(const StudySpec& spec);

struct SweepEntry {
  double alpha = 0.0;
  double beta = 0.0;
  ConvergenceTable table;
};

/// Temporal studies for every (alpha, beta) pair on `schedule`.
std::vector<SweepEntry> damping_sweep(int dim, const std::vector<double>& alphas,
                                      const std::vector<double>& betas,
                                      const std::vector<ScheduleRow>& schedule,
                                      double t_final = 1.0);
/// Schedule used by the damping sweep: 1-D n = 6, 7, 8 with k = 1e-4 h^{2/3},
/// 3-D n = 3, 4, 5 with k = 1e-3 h^{2/3}.
std::vector<ScheduleRow> sweep_schedule(int dim);

/// CSV columns k,h,linf,l2,h1 and a trailing "order" row with the slopes.
void write_table_csv(std::ostream& os, const ConvergenceTable& table);
void write_table_markdown(std::ostream& os, const ConvergenceTable& table);
/// table_{id}_{dim}d
std::string table_basename(const ConvergenceTable& table);


/// Diffusion-only runs from seeded random data (components uniform in
/// [-1, 1], no normalization) over a sweep of k/h^2 ratios.
struct StabilityStudy {
  int dim = 1;
  int n = 32;
  double beta = 1.0;
  std::vector<double> ratios{1e-2, 1.0, 1e2, 1e4};
  int trials = 20;
  long steps = 100;
  std::uint64_t seed = 2024;
  ImexTableau tableau = default_tableau();
  /// Allowed relative growth of the l2 norm per step.
  double growth_slack = 1e-13;
  /// Allowed relative excess of the gradient sum over |m_0|^2.
  double energy_slack = 1e-10;
};

struct StabilityRun {
  double ratio = 0.0;
  int trial = 0;
  double k = 0.0;
  double h = 0.0;
  double initial_sq = 0.0;       // |m_0|_2^2
  double final_l2 = 0.0;
  double max_growth = 0.0;       // max over steps of |m_{n+1}| / |m_n| - 1
  double gradient_sum = 0.0;     // sum_n beta k sum_i margin_i |grad X_i|^2
  long first_violation = -1;     // first step breaking monotonicity, -1 if none
  bool energy_ok = true;

  bool passed() const noexcept { return first_violation < 0 && energy_ok; }
};

/// Throws InputError / InvalidTableau before running anything when the
/// parameters or the tableau are not admissible.
std::vector<StabilityRun> diffusion_stability(const StabilityStudy& study);

/// CSV: ratio,trial,k,h,initial_sq,final_l2,max_growth,gradient_sum,first_violation,energy_ok
void write_stability_csv(std::ostream& os, const std::vector<StabilityRun>& runs);

}  // namespace llg
