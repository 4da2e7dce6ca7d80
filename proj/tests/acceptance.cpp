// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helmholtz_oracle.hpp"
#include "imexllg/dynamics.hpp"
#include "imexllg/helmholtz.hpp"
#include "imexllg/integrator.hpp"
#include "imexllg/parallel.hpp"
#include "imexllg/tableau.hpp"
#include "imexllg/verification.hpp"
#include "semidiscrete.hpp"
#include "support.hpp"

using namespace llg;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string orders_text(const FittedOrders& f) {
  std::ostringstream ss;
  ss.precision(4);
  ss << f.linf << "/" << f.l2 << "/" << f.h1;
  return ss.str();
}

bool in_band(const FittedOrders& f, double lo, double hi) {
  for (double v : {f.linf, f.l2, f.h1})
    if (!(v >= lo && v <= hi)) return false;
  return true;
}

// 1. Tableau audit
void tableau_audit(Outcome& o) {
  const auto start = Clock::now();
  const ImexTableau t = default_tableau();
  const StructureReport s = validate_structure(t);
  double worst = 0.0;
  for (const auto& r : order_residuals(t, 3)) worst = std::max(worst, r.residual);
  const StabilityMargins m = stability_margins(t);
  const double secs = seconds_since(start);
  o.require(s.passed(), "structure checks");
  o.require(s.max_residual() <= 1e-7, "row-sum residuals <= 1e-7");
  o.require(worst <= 5e-6, "order residuals <= 5e-6");
  o.require(std::abs(m.m2 - 0.06825992) <= 1e-8 && std::abs(m.m3 - 0.10528603) <= 1e-8 &&
                std::abs(m.m4 - 0.01284959) <= 1e-8,
            "margins within 1e-8");
  o.require(secs < 1.0, "runtime < 1 s");
  o.detail.precision(10);
  o.detail << "max order residual " << worst << ", margins (" << m.m2 << ", " << m.m3 << ", "
           << m.m4 << "), " << secs << " s";
}

void temporal(Outcome& o, int dim, double lo, double hi) {
  const auto start = Clock::now();
  const ConvergenceTable t = convergence_study(default_study(dim, Refinement::Temporal));
  const double secs = seconds_since(start);
  o.require(in_band(t.orders, lo, hi), "orders in band");
  o.require(secs < 120.0, "runtime < 2 min");
  o.detail << "orders " << orders_text(t.orders) << " in [" << lo << ", " << hi << "], " << secs
           << " s";
}

// 4. Spatial convergence in 1-D and 3-D
void spatial(Outcome& o) {
  const auto start = Clock::now();
  for (int dim : {1, 3}) {
    const ConvergenceTable t = convergence_study(default_study(dim, Refinement::Spatial));
    o.require(in_band(t.orders, 1.8, 2.2), std::to_string(dim) + "-D orders in [1.8, 2.2]");
    o.detail << dim << "-D orders " << orders_text(t.orders) << "; ";
  }
  const double secs = seconds_since(start);
  o.require(secs < 600.0, "runtime < 10 min");
  o.detail << secs << " s";
}

// 5. Damping sweep
void sweep(Outcome& o) {
  const auto start = Clock::now();
  for (int dim : {1, 3}) {
    const double lo = dim == 1 ? 2.7 : 2.8;
    const double hi = dim == 1 ? 3.2 : 3.4;
    double low = 1e9, high = -1e9;
    for (const auto& e : damping_sweep(dim, {0.001, 0.1}, {1.0, 3.0, 5.0}, sweep_schedule(dim))) {
      const FittedOrders& f = e.table.orders;
      low = std::min({low, f.linf, f.l2, f.h1});
      high = std::max({high, f.linf, f.l2, f.h1});
      std::ostringstream what;
      what << dim << "-D alpha " << e.alpha << " beta " << e.beta;
      o.require(in_band(f, lo, hi), what.str());
    }
    o.detail.precision(4);
    o.detail << dim << "-D orders within [" << low << ", " << high << "]; ";
  }
  const double secs = seconds_since(start);
  o.require(secs < 900.0, "runtime < 15 min");
  o.detail << secs << " s";
}

// 6. Unconditional diffusion stability
void diffusion(Outcome& o) {
  const auto start = Clock::now();
  for (int dim : {1, 3}) {
    StabilityStudy study;
    study.dim = dim;
    study.n = dim == 1 ? 32 : 8;
    const auto runs = diffusion_stability(study);
    int violations = 0;
    double growth = -1.0, energy = 0.0;
    for (const auto& r : runs) {
      if (!r.passed()) ++violations;
      growth = std::max(growth, r.max_growth);
      energy = std::max(energy, r.gradient_sum / r.initial_sq);
    }
    o.require(violations == 0, std::to_string(dim) + "-D zero violations");
    o.require(runs.size() >= 80, "4 ratios x 20 trials");
    o.detail.precision(3);
    o.detail << dim << "-D: " << runs.size() << " runs, max growth " << growth
             << ", max gradient sum/|m0|^2 " << energy << "; ";
  }
  o.detail << seconds_since(start) << " s";
}

// 7. Stage solver against a dense factorization
void solver_oracle(Outcome& o) {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> expo(-4.0, 2.0);
  int pairs = 0;
  double worst = 0.0, worst_sym = 0.0, worst_spd = 0.0;
  std::vector<GridSpec> grids;
  for (int n : {2, 3, 4, 5, 6, 8, 10, 12, 16, 27, 64, 125, 343, 1000, 1728}) grids.emplace_back(1, n);
  for (int n = 2; n <= 12; ++n) grids.emplace_back(3, n);
  for (const GridSpec& g : grids) {
    const int count = g.interior_size() > 700 ? 1 : 3;
    for (int r = 0; r < count; ++r) {
      const double sigma = std::pow(10.0, expo(rng));
      const StageSystem sys(g, sigma);
      const VectorField rhs = testing::random_field(g, rng());
      const VectorField u = sys.solve(rhs);
      worst = std::max(worst, testing::rel_l2_diff(u, oracle::dense_solve(g, sigma, rhs)));
      const VectorField a = testing::random_field(g, rng());
      const VectorField b = testing::random_field(g, rng());
      const double ab = inner(sys.apply(a), b);
      const double ba = inner(a, sys.apply(b));
      worst_sym = std::max(worst_sym, std::abs(ab - ba) / std::max(1.0, std::abs(ab)));
      // <(I - sigma Lap) a, a> - |a|^2 must be >= 0
      const double aa = inner(a, a);
      worst_spd = std::max(worst_spd, (aa - inner(sys.apply(a), a)) / aa);
      ++pairs;
    }
  }
  o.require(pairs >= 50, ">= 50 pairs");
  o.require(worst <= 1e-10, "relative l2 error <= 1e-10");
  o.require(worst_sym <= 1e-12, "symmetry to 1e-12");
  o.require(worst_spd <= 1e-12, "SPD bound to 1e-12");
  o.detail.precision(3);
  o.detail << pairs << " pairs on " << grids.size() << " grids, max rel error " << worst
           << ", symmetry " << worst_sym << ", SPD slack " << worst_spd;
}

// 8. Property suite
void properties(Outcome& o) {
  double sbp = 0.0;
  for (int dim : {1, 3})
    for (int n : {4, 9, 12}) {
      const GridSpec g(dim, n);
      const VectorField f = testing::random_field(g, 10 + n);
      const VectorField v = testing::random_field(g, 20 + n);
      VectorField lap = laplacian(f);
      lap.scale(-1.0);
      const double rhs = grad_inner(f, v);
      sbp = std::max(sbp, std::abs(inner(lap, v) - rhs) / std::max(1.0, std::abs(rhs)));
    }
  o.require(sbp <= 1e-12, "summation by parts to 1e-12");

  double ortho = 0.0, fixed = 0.0;
  for (int dim : {1, 3}) {
    const GridSpec g(dim, dim == 1 ? 64 : 8);
    const VectorField m = testing::random_unit_field(g, 3);
    ModelConfig cfg;
    VectorField total = nonlinear_part(cfg, m, 0.0);
    total.axpy(1.0, linear_part(cfg, m));
    for (int k = g.first(2); k <= g.last(2); ++k)
      for (int j = g.first(1); j <= g.last(1); ++j)
        for (int i = 1; i <= g.n(); ++i) {
          const Vec3 r = total.cell(i, j, k);
          ortho = std::max(ortho, std::abs(dot(m.cell(i, j, k), r)) /
                                      std::max(1.0, std::sqrt(dot(r, r))));
        }
    RunConfig run{g, cfg, default_tableau(), 1e-3, 1e-2, 0};
    const VectorField up(g, Vec3{0.0, 0.0, 1.0});
    fixed = std::max(fixed, testing::max_interior_diff(integrate(run, up).final_state, up));
  }
  o.require(ortho <= 1e-14, "gyromagnetic orthogonality to 1e-14");
  o.require(fixed <= 1e-14, "constant-state fixed point to 1e-14");

  SearchOptions near;
  near.initial_guess = default_tableau();
  near.max_restarts = 1;
  const GridSpec g(1, 16);
  const ManufacturedCase mc = manufactured_case(1, 0.01);
  RunConfig cfg{g, {}, search_tableau(1, 1e-14, near), 1e-4, 1.0, 0};
  cfg.model.source = mc.source();
  const VectorField m0 = mc.sample(g, 0.5);
  std::vector<double> ks, errs;
  for (double k : {1e-4, 5e-5, 2.5e-5, 1.25e-5}) {
    cfg.k = k;
    cfg.t_final = k;
    VectorField d = imex_rk_step(cfg, m0, 0.5);
    d.axpy(-1.0, semidiscrete::advance(cfg.model, m0, 0.5, k, 0.01 * g.h() * g.h() / 4.0));
    ks.push_back(k);
    errs.push_back(std::sqrt(inner(d, d)));
  }
  const double local = fit_slope(ks, errs);
  o.require(std::abs(local - 4.0) <= 0.3, "local order 4 +- 0.3");

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double unit = 0.0, neumann = 0.0;
  for (int dim : {1, 3}) {
    const ManufacturedCase c = manufactured_case(dim, 0.01);
    for (int s = 0; s < 1000; ++s) {
      Vec3 x{u(rng), u(rng), u(rng)};
      const double t = 3.0 * u(rng);
      const Vec3 m = c.exact(x, t);
      unit = std::max(unit, std::abs(std::sqrt(dot(m, m)) - 1.0));
      const int axis = dim == 1 ? 0 : s % 3;
      x[axis] = s % 2 == 0 ? 0.0 : 1.0;
      const Vec3 dn = c.derivative(axis, x, t);
      neumann = std::max(neumann, std::sqrt(dot(dn, dn)));
    }
  }
  o.require(unit <= 1e-12, "|m_e| = 1 to 1e-12");
  o.require(neumann <= 1e-12, "Neumann compatibility to 1e-12");
  o.detail.precision(3);
  o.detail << "SBP " << sbp << ", orthogonality " << ortho << ", fixed point " << fixed
           << ", local order " << local << ", unit length " << unit << ", normal derivative "
           << neumann;
}

}  // namespace

int main() {
  parallel::configure_from_env();
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"tableau audit", tableau_audit},
      {"1-D temporal convergence", [](Outcome& o) { temporal(o, 1, 2.7, 3.2); }},
      {"3-D temporal convergence", [](Outcome& o) { temporal(o, 3, 2.8, 3.4); }},
      {"spatial convergence", spatial},
      {"damping sweep", sweep},
      {"unconditional diffusion stability", diffusion},
      {"stage-solver oracle equivalence", solver_oracle},
      {"property suite", properties},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
