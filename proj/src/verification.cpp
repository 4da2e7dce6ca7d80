#include "imexllg/verification.hpp"

#include <cmath>
#include <exception>
#include <random>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "imexllg/error.hpp"
#include "imexllg/integrator.hpp"

namespace llg {

namespace {

struct Profile {
  double value;  // X
  double d1;     // X'
  double d2;     // X''
};

Profile profile(double x) {
  return {x * x * (1.0 - x) * (1.0 - x), 2.0 * x * (1.0 - x) * (1.0 - 2.0 * x),
          2.0 * (1.0 - 6.0 * x + 6.0 * x * x)};
}

struct Phase {
  double phi = 0.0;
  double grad_sq = 0.0;
  double lap = 0.0;
  Vec3 grad{0.0, 0.0, 0.0};
};

Phase phase(int dim, const Vec3& x) {
  const Profile px = profile(x[0]);
  if (dim == 1) return {px.value, px.d1 * px.d1, px.d2, {px.d1, 0.0, 0.0}};
  const Profile py = profile(x[1]);
  const Profile pz = profile(x[2]);
  const double gx = px.d1 * py.value * pz.value;
  const double gy = px.value * py.d1 * pz.value;
  const double gz = px.value * py.value * pz.d1;
  return {px.value * py.value * pz.value, gx * gx + gy * gy + gz * gz,
          px.d2 * py.value * pz.value + px.value * py.d2 * pz.value +
              px.value * py.value * pz.d2,
          {gx, gy, gz}};
}

std::string number_label(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

[[noreturn]] void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const DivergenceError& e) {
    throw DivergenceError(context + ": " + e.what(), e.step(), e.stage());
  } catch (const InputError& e) {
    throw InputError(context + ": " + e.what());
  } catch (const InvalidTableau& e) {
    throw InvalidTableau(context + ": " + e.what());
  } catch (const Error& e) {
    throw Error(context + ": " + e.what());
  }
}

}  // namespace

Vec3 ManufacturedCase::exact(const Vec3& x, double t) const {
  const double phi = phase(dim, x).phi;
  const double s = std::sin(t);
  return {std::cos(phi) * s, std::sin(phi) * s, std::cos(t)};
}

Vec3 ManufacturedCase::time_derivative(const Vec3& x, double t) const {
  const double phi = phase(dim, x).phi;
  const double c = std::cos(t);
  return {std::cos(phi) * c, std::sin(phi) * c, -std::sin(t)};
}

Vec3 ManufacturedCase::derivative(int axis, const Vec3& x, double t) const {
  const Phase p = phase(dim, x);
  const double s = std::sin(t) * p.grad[axis];
  return {-std::sin(p.phi) * s, std::cos(p.phi) * s, 0.0};
}

Vec3 ManufacturedCase::laplacian(const Vec3& x, double t) const {
  const Phase p = phase(dim, x);
  const double s = std::sin(t);
  const double cp = std::cos(p.phi);
  const double sp = std::sin(p.phi);
  return {(-sp * p.lap - cp * p.grad_sq) * s, (cp * p.lap - sp * p.grad_sq) * s, 0.0};
}

double ManufacturedCase::gradient_sq(const Vec3& x, double t) const {
  const double s = std::sin(t);
  return s * s * phase(dim, x).grad_sq;
}

Vec3 ManufacturedCase::forcing(const Vec3& x, double t) const {
  const Vec3 m = exact(x, t);
  const Vec3 dt = time_derivative(x, t);
  const Vec3 lap = laplacian(x, t);
  const double g2 = gradient_sq(x, t);
  Vec3 f;
  for (int c = 0; c < 3; ++c) f[c] = dt[c] - alpha * epsilon * (lap[c] + g2 * m[c]);
  if (gyromagnetic) {
    const Vec3 prec = cross(m, lap);
    for (int c = 0; c < 3; ++c) f[c] += epsilon * prec[c];
  }
  return f;
}

SpaceTimeField ManufacturedCase::source() const {
  const ManufacturedCase copy = *this;
  return [copy](double t, const Vec3& x) { return copy.forcing(x, t); };
}

VectorField ManufacturedCase::sample(const GridSpec& grid, double t) const {
  return llg::sample(grid, [&](const Vec3& x) { return exact(x, t); });
}

ManufacturedCase manufactured_case(int dim, double alpha, double epsilon, Variant variant) {
  if (dim != 1 && dim != 3) {
    throw InputError("manufactured case needs dim 1 or 3, got " + std::to_string(dim));
  }
  if (variant == Variant::PureDiffusion) {
    throw InputError("no manufactured case for the diffusion-only variant");
  }
  return {dim, alpha, epsilon, variant == Variant::FullLL};
}

ErrorReport errors_vs_exact(const VectorField& m, const ManufacturedCase& mc, double t) {
  const GridSpec& g = m.grid();
  if (g.dim() != mc.dim) throw DimensionError("errors_vs_exact: dimension mismatch");
  VectorField diff = mc.sample(g, t);
  diff.scale(-1.0).axpy(1.0, m);
  fill_ghosts(diff);
  const Norms nm = norms(diff);
  return {0.0, g.h(), nm.linf, nm.l2, nm.h1};
}

std::string to_string(Refinement r) {
  return r == Refinement::Temporal ? "temporal" : "spatial";
}

Refinement parse_refinement(const std::string& name) {
  if (name == "temporal") return Refinement::Temporal;
  if (name == "spatial") return Refinement::Spatial;
  throw InputError("unknown refinement '" + name + "' (expected temporal or spatial)");
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InputError("fit_slope: size mismatch");
  if (x.size() < 3) {
    throw InsufficientData("order fit needs at least 3 rows, got " + std::to_string(x.size()));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw InputError("order fit needs positive finite data");
    }
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

FittedOrders fit_order(const std::vector<ErrorReport>& rows, Refinement against) {
  if (rows.size() < 3) {
    throw InsufficientData("order fit needs at least 3 rows, got " + std::to_string(rows.size()));
  }
  std::vector<double> step, linf, l2, h1;
  for (const auto& r : rows) {
    const double s = against == Refinement::Temporal ? r.k : r.h;
    for (double prev : step) {
      if (prev == s) throw InsufficientData("order fit needs distinct step sizes");
    }
    step.push_back(s);
    linf.push_back(r.linf);
    l2.push_back(r.l2);
    h1.push_back(r.h1);
  }
  return {fit_slope(step, linf), fit_slope(step, l2), fit_slope(step, h1)};
}

std::vector<ScheduleRow> coupled_schedule(const std::vector<int>& cells, double coeff) {
  std::vector<ScheduleRow> out;
  for (int n : cells) out.push_back({n, coeff * std::pow(1.0 / n, 2.0 / 3.0)});
  return out;
}

std::vector<ScheduleRow> default_schedule(int dim, Refinement refinement) {
  if (dim != 1 && dim != 3) throw InputError("dim must be 1 or 3");
  if (refinement == Refinement::Temporal) {
    return dim == 1 ? coupled_schedule({6, 7, 8, 9}, 1e-4) : coupled_schedule({2, 3, 4, 5}, 1e-3);
  }
  if (dim == 1) return {{160, 1e-7}, {240, 1e-7}, {320, 1e-7}, {400, 1e-7}};
  return {{4, 1e-4}, {5, 1e-4}, {6, 1e-4}, {7, 1e-4}};
}

double default_t_final(int dim, Refinement refinement) {
  return dim == 1 && refinement == Refinement::Spatial ? 1e-2 : 1.0;
}

StudySpec default_study(int dim, Refinement refinement) {
  StudySpec spec;
  spec.dim = dim;
  spec.refinement = refinement;
  spec.t_final = default_t_final(dim, refinement);
  spec.schedule = default_schedule(dim, refinement);
  return spec;
}

ConvergenceTable convergence_study(const StudySpec& spec) {
  if (spec.schedule.empty()) throw InputError("convergence study needs a nonempty schedule");
  const ManufacturedCase mc = manufactured_case(spec.dim, spec.alpha, spec.epsilon, spec.variant);

  ConvergenceTable table;
  table.id = to_string(spec.refinement);
  table.dim = spec.dim;
  table.against = spec.refinement;
  const int rows = static_cast<int>(spec.schedule.size());
  table.rows.resize(rows);
  std::vector<std::exception_ptr> failures(rows);

#pragma omp parallel for schedule(dynamic, 1) if (spec.parallel_rows)
  for (int r = 0; r < rows; ++r) {
    const ScheduleRow row = spec.schedule[r];
    try {
      try {
        RunConfig cfg{GridSpec(spec.dim, row.n), {}, default_tableau(), row.k, spec.t_final, 0};
        cfg.model.alpha = spec.alpha;
        cfg.model.beta = spec.beta;
        cfg.model.epsilon = spec.epsilon;
        cfg.model.variant = spec.variant;
        cfg.model.source = mc.source();
        const RunResult run = integrate(cfg, mc.sample(cfg.grid, 0.0));
        ErrorReport rep = errors_vs_exact(run.final_state, mc, run.t_final);
        rep.k = row.k;
        table.rows[r] = rep;
      } catch (const Error&) {
        std::ostringstream ctx;
        ctx << std::setprecision(6) << "row " << r + 1 << " (n=" << row.n << ", k=" << row.k << ")";
        rethrow_with_context(ctx.str());
      }
    } catch (...) {
      failures[r] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  if (rows >= 3) table.orders = fit_order(table.rows, spec.refinement);
  return table;
}

std::vector<ScheduleRow> sweep_schedule(int dim) {
  if (dim != 1 && dim != 3) throw InputError("dim must be 1 or 3");
  return dim == 1 ? coupled_schedule({6, 7, 8}, 1e-4) : coupled_schedule({3, 4, 5}, 1e-3);
}

std::vector<SweepEntry> damping_sweep(int dim, const std::vector<double>& alphas,
                                      const std::vector<double>& betas,
                                      const std::vector<ScheduleRow>& schedule, double t_final) {
  if (alphas.empty() || betas.empty()) throw InputError("damping sweep needs alphas and betas");
  std::vector<SweepEntry> out;
  for (double a : alphas) {
    for (double b : betas) {
      StudySpec spec;
      spec.dim = dim;
      spec.alpha = a;
      spec.beta = b;
      spec.t_final = t_final;
      spec.schedule = schedule;
      ConvergenceTable table = convergence_study(spec);
      table.id = "sweep_alpha" + number_label(a) + "_beta" + number_label(b);
      out.push_back({a, b, std::move(table)});
    }
  }
  return out;
}

void write_table_csv(std::ostream& os, const ConvergenceTable& table) {
  const auto old = os.precision(17);
  os << "k,h,linf,l2,h1\n";
  for (const auto& r : table.rows) {
    os << r.k << ',' << r.h << ',' << r.linf << ',' << r.l2 << ',' << r.h1 << '\n';
  }
  if (table.rows.size() >= 3) {
    os << "order,," << table.orders.linf << ',' << table.orders.l2 << ',' << table.orders.h1
       << '\n';
  }
  os.precision(old);
}

void write_table_markdown(std::ostream& os, const ConvergenceTable& table) {
  const auto old = os.precision(4);
  os << "| k | h | linf | l2 | h1 |\n|---|---|---|---|---|\n";
  for (const auto& r : table.rows) {
    os << "| " << r.k << " | " << r.h << " | " << r.linf << " | " << r.l2 << " | " << r.h1
       << " |\n";
  }
  if (table.rows.size() >= 3) {
    os << "| order | | " << table.orders.linf << " | " << table.orders.l2 << " | "
       << table.orders.h1 << " |\n";
  }
  os.precision(old);
}

std::string table_basename(const ConvergenceTable& table) {
  return "table_" + table.id + "_" + std::to_string(table.dim) + "d";
}


std::vector<StabilityRun> diffusion_stability(const StabilityStudy& study) {
  if (study.trials < 1) throw InputError("stability study needs trials >= 1");
  if (study.steps < 1) throw InputError("stability study needs steps >= 1");
  if (study.ratios.empty()) throw InputError("stability study needs at least one k/h^2 ratio");
  const GridSpec grid(study.dim, study.n);
  const double h = grid.h();
  const StabilityMargins margins = stability_margins(study.tableau);
  const double weight[4] = {0.0, margins.m2, margins.m3, margins.m4};

  std::vector<RunConfig> configs;
  for (double ratio : study.ratios) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) throw InputError("k/h^2 ratios must be positive");
    RunConfig cfg{grid, {}, study.tableau, ratio * h * h, 0.0, 0};
    cfg.t_final = static_cast<double>(study.steps) * cfg.k;
    cfg.model.beta = study.beta;
    cfg.model.variant = Variant::PureDiffusion;
    cfg.validate();
    configs.push_back(cfg);
  }

  const int total = static_cast<int>(study.ratios.size()) * study.trials;
  std::vector<StabilityRun> runs(total);
  std::vector<std::exception_ptr> failures(total);
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < total; ++r) {
    try {
      const int ri = r / study.trials;
      const RunConfig& cfg = configs[ri];
      StabilityRun& run = runs[r];
      run.ratio = study.ratios[ri];
      run.trial = r % study.trials;
      run.k = cfg.k;
      run.h = h;

      std::seed_seq seq{study.seed, static_cast<std::uint64_t>(r)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> uni(-1.0, 1.0);
      VectorField m(grid);
      for (int k = grid.first(2); k <= grid.last(2); ++k)
        for (int j = grid.first(1); j <= grid.last(1); ++j)
          for (int i = 1; i <= grid.n(); ++i) {
            const double a = uni(rng);
            const double b = uni(rng);
            const double c = uni(rng);
            m.set_cell({a, b, c}, i, j, k);
          }
      fill_ghosts(m);

      ImexStepper stepper(cfg);
      run.initial_sq = inner(m, m);
      double previous = std::sqrt(run.initial_sq);
      const double scale = study.beta * cfg.k;
      const StageObserver observer = [&](int stage, const VectorField& x) {
        if (stage >= 1 && stage <= 3) run.gradient_sum += scale * weight[stage] * grad_inner(x, x);
      };
      for (long step = 0; step < study.steps; ++step) {
        stepper.step(m, static_cast<double>(step) * cfg.k, step + 1, observer);
        const double now = std::sqrt(inner(m, m));
        if (previous > 0.0) run.max_growth = std::max(run.max_growth, now / previous - 1.0);
        if (now > previous * (1.0 + study.growth_slack) && run.first_violation < 0) {
          run.first_violation = step + 1;
        }
        previous = now;
      }
      run.final_l2 = previous;
      run.energy_ok = run.gradient_sum <= run.initial_sq * (1.0 + study.energy_slack);
    } catch (...) {
      failures[r] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return runs;
}

void write_stability_csv(std::ostream& os, const std::vector<StabilityRun>& runs) {
  const auto old = os.precision(17);
  os << "ratio,trial,k,h,initial_sq,final_l2,max_growth,gradient_sum,first_violation,energy_ok\n";
  for (const auto& r : runs) {
    os << r.ratio << ',' << r.trial << ',' << r.k << ',' << r.h << ',' << r.initial_sq << ','
       << r.final_l2 << ',' << r.max_growth << ',' << r.gradient_sum << ',' << r.first_violation
       << ',' << (r.energy_ok ? 1 : 0) << '\n';
  }
  os.precision(old);
}

}  // namespace llg
