#include "imexllg/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>

#include "imexllg/error.hpp"
#include "imexllg/parallel.hpp"
#include "imexllg/tableau.hpp"
#include "imexllg/verification.hpp"

namespace llg::cli {

namespace {

namespace fs = std::filesystem;

// A failed check or run, reported with exit code 1.
struct Failure {
  std::string message;
};

// Bad input discovered after parsing (unreadable file, inadmissible setup).
struct Usage {
  std::string message;
};

std::ofstream open_output(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream os(fs::path(dir) / name);
  if (!os) throw Usage{"cannot write '" + (fs::path(dir) / name).string() + "'"};
  return os;
}

std::string fmt4(double v) {
  std::ostringstream ss;
  ss << std::setprecision(4) << v;
  return ss.str();
}

void print_orders(std::ostream& out, const ConvergenceTable& t) {
  out << "orders linf/l2/h1: " << fmt4(t.orders.linf) << " / " << fmt4(t.orders.l2) << " / "
      << fmt4(t.orders.h1) << '\n';
}

void write_table(const std::string& dir, const ConvergenceTable& table) {
  {
    auto os = open_output(dir, table_basename(table) + ".csv");
    write_table_csv(os, table);
  }
  auto os = open_output(dir, table_basename(table) + ".md");
  write_table_markdown(os, table);
}

std::vector<ScheduleRow> schedule_for(int dim, Refinement refinement,
                                      const std::vector<int>& cells) {
  auto rows = default_schedule(dim, refinement);
  if (cells.empty()) return rows;
  if (refinement == Refinement::Spatial) {
    std::vector<ScheduleRow> out;
    for (int n : cells) out.push_back({n, rows.front().k});
    return out;
  }
  return coupled_schedule(cells, dim == 1 ? 1e-4 : 1e-3);
}

struct TableauOptions {
  std::string builtin;
  std::string file;
  double tol = 5e-6;
  std::string out;
};

int verify_tableau(const TableauOptions& o, std::ostream& out) {
  ImexTableau t;
  if (!o.file.empty()) {
    try {
      t = load_tableau(o.file);
    } catch (const ParseError& e) {
      throw Usage{e.what()};
    }
  } else {
    t = default_tableau();
  }
  bool ok = true;
  const StructureReport structure = validate_structure(t);
  out << "structure:\n";
  for (const auto& c : structure.checks) {
    out << "  " << (c.passed ? "ok   " : "FAIL ") << c.name << " (residual " << fmt4(c.residual)
        << ")\n";
  }
  ok = ok && structure.passed();
  if (!structure.shape_passed()) {
    out << "order conditions skipped: tableau shape invalid\n";
    return kExitFailure;
  }

  const auto residuals = order_residuals(t, 3);
  out << "order conditions (tol " << fmt4(o.tol) << "):\n";
  for (const auto& r : residuals) {
    const bool pass = r.residual <= o.tol;
    ok = ok && pass;
    out << "  " << (pass ? "ok   " : "FAIL ") << "order " << r.order << "  " << r.name
        << "  residual " << fmt4(r.residual) << '\n';
  }
  if (!o.out.empty()) {
    auto os = open_output(o.out, "tableau_residuals.csv");
    write_residual_csv(os, residuals);
  }

  try {
    const StabilityMargins m = stability_margins(t);
    out << std::fixed << std::setprecision(8) << "stability margins: (" << m.m2 << ", " << m.m3
        << ", " << m.m4 << ")\n"
        << std::defaultfloat;
    if (!m.admissible()) {
      out << "FAIL stability margins not all positive\n";
      ok = false;
    }
  } catch (const Unsupported& e) {
    out << "FAIL stability margins: " << e.what() << '\n';
    ok = false;
  }
  out << (ok ? "tableau accepted\n" : "tableau rejected\n");
  return ok ? kExitOk : kExitFailure;
}

struct ModelOptions {
  double alpha = 0.01;
  double beta = 3.0;
  double epsilon = 1.0;
  std::optional<double> t_final;
  std::string out = ".";
  std::vector<int> cells;
};

struct ConvergenceOptions {
  ModelOptions model;
  int dim = 1;
  std::string refine = "temporal";
};

int convergence(const ConvergenceOptions& o, std::ostream& out) {
  const Refinement refinement = parse_refinement(o.refine);
  StudySpec spec = default_study(o.dim, refinement);
  spec.alpha = o.model.alpha;
  spec.beta = o.model.beta;
  spec.epsilon = o.model.epsilon;
  if (o.model.t_final) spec.t_final = *o.model.t_final;
  spec.schedule = schedule_for(o.dim, refinement, o.model.cells);
  if (spec.schedule.size() < 3) throw Usage{"a convergence study needs at least 3 grids"};

  ConvergenceTable table;
  try {
    table = convergence_study(spec);
  } catch (const DivergenceError& e) {
    throw Failure{e.what()};
  }
  write_table(o.model.out, table);
  write_table_markdown(out, table);
  print_orders(out, table);
  return kExitOk;
}

struct SweepOptions {
  ModelOptions model;
  int dim = 1;
  std::vector<double> alphas{0.001, 0.1};
  std::vector<double> betas{1.0, 3.0, 5.0};
  std::optional<double> min_order;
  std::optional<double> max_order;
};

int sweep(const SweepOptions& o, std::ostream& out) {
  if (o.dim != 1 && o.dim != 3) throw Usage{"--dim must be 1 or 3"};
  const double lo = o.min_order.value_or(o.dim == 1 ? 2.7 : 2.8);
  const double hi = o.max_order.value_or(o.dim == 1 ? 3.2 : 3.4);
  std::vector<ScheduleRow> schedule = sweep_schedule(o.dim);
  if (!o.model.cells.empty()) schedule = coupled_schedule(o.model.cells, o.dim == 1 ? 1e-4 : 1e-3);
  if (schedule.size() < 3) throw Usage{"a damping sweep needs at least 3 grids"};

  std::vector<SweepEntry> entries;
  try {
    entries = damping_sweep(o.dim, o.alphas, o.betas, schedule, o.model.t_final.value_or(1.0));
  } catch (const DivergenceError& e) {
    throw Failure{e.what()};
  }
  bool ok = true;
  out << "| alpha | beta | linf | l2 | h1 | status |\n|---|---|---|---|---|---|\n";
  for (const auto& e : entries) {
    write_table(o.model.out, e.table);
    const FittedOrders& f = e.table.orders;
    const bool pass = std::min({f.linf, f.l2, f.h1}) >= lo && std::max({f.linf, f.l2, f.h1}) <= hi;
    ok = ok && pass;
    out << "| " << e.alpha << " | " << e.beta << " | " << fmt4(f.linf) << " | " << fmt4(f.l2)
        << " | " << fmt4(f.h1) << " | " << (pass ? "ok" : "OUT OF BAND") << " |\n";
  }
  out << "band [" << lo << ", " << hi << "]: " << (ok ? "all orders inside" : "violations")
      << '\n';
  return ok ? kExitOk : kExitFailure;
}

struct StabilityOptions {
  StabilityStudy study;
  std::string out;
  bool negate_a33 = false;
};

int stability(StabilityOptions o, std::ostream& out) {
  if (o.negate_a33) o.study.tableau.a_implicit(2, 2) = -o.study.tableau.a_implicit(2, 2);
  std::vector<StabilityRun> runs;
  try {
    runs = diffusion_stability(o.study);
  } catch (const InputError& e) {
    throw Usage{e.what()};
  } catch (const InvalidTableau& e) {
    throw Usage{e.what()};
  } catch (const DivergenceError& e) {
    throw Failure{e.what()};
  }
  if (!o.out.empty()) {
    auto os = open_output(o.out, "diffusion_stability.csv");
    write_stability_csv(os, runs);
  }
  const StabilityRun* first_bad = nullptr;
  double worst_growth = -1.0;
  double worst_energy = 0.0;
  for (const auto& r : runs) {
    worst_growth = std::max(worst_growth, r.max_growth);
    worst_energy = std::max(worst_energy, r.gradient_sum / r.initial_sq);
    if (!r.passed() && !first_bad) first_bad = &r;
  }
  out << runs.size() << " runs, " << o.study.steps << " steps each\n"
      << "max relative l2 growth per step: " << fmt4(worst_growth) << '\n'
      << "max gradient sum / |m0|^2: " << fmt4(worst_energy) << '\n';
  if (first_bad) {
    std::ostringstream msg;
    msg << std::setprecision(6) << "stability violated at k=" << first_bad->k
        << ", h=" << first_bad->h;
    if (first_bad->first_violation >= 0) msg << ", step " << first_bad->first_violation;
    else msg << " (gradient sum bound)";
    throw Failure{msg.str()};
  }
  out << "no violations\n";
  return kExitOk;
}

void add_model_flags(CLI::App* cmd, ModelOptions& m, bool with_coefficients) {
  if (with_coefficients) {
    cmd->add_option("--alpha", m.alpha, "damping parameter")->check(CLI::PositiveNumber);
    cmd->add_option("--beta", m.beta, "artificial diffusion")->check(CLI::PositiveNumber);
  }
  cmd->add_option("--epsilon", m.epsilon, "exchange coefficient")->check(CLI::PositiveNumber);
  cmd->add_option("--t-final", m.t_final, "final time")->check(CLI::PositiveNumber);
  cmd->add_option("--out", m.out, "output directory")->capture_default_str();
  cmd->add_option("--cells", m.cells, "override the grid sizes of the schedule")
      ->delimiter(',')
      ->check(CLI::Range(2, 4096));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  parallel::configure_from_env();
  CLI::App app{"IMEX Runge-Kutta solver for the Landau-Lifshitz equation", "llg"};
  app.require_subcommand(1, 1);

  TableauOptions tab;
  auto* cmd_tab = app.add_subcommand("verify-tableau", "check structure, order conditions and stability margins");
  auto* builtin = cmd_tab->add_option("--builtin", tab.builtin, "built-in tableau")
                      ->check(CLI::IsMember({"paper"}));
  auto* file = cmd_tab->add_option("--file", tab.file, "tableau file");
  builtin->excludes(file);
  cmd_tab->add_option("--tol", tab.tol, "order residual tolerance")->check(CLI::PositiveNumber);
  cmd_tab->add_option("--out", tab.out, "write tableau_residuals.csv here");

  ConvergenceOptions conv;
  auto* cmd_conv = app.add_subcommand("convergence", "manufactured-solution convergence study");
  cmd_conv->add_option("--dim", conv.dim)->check(CLI::IsMember({1, 3}))->capture_default_str();
  cmd_conv->add_option("--refine", conv.refine)
      ->check(CLI::IsMember({"temporal", "spatial"}))
      ->capture_default_str();
  add_model_flags(cmd_conv, conv.model, true);

  SweepOptions sw;
  auto* cmd_sweep = app.add_subcommand("damping-sweep", "temporal order for each (alpha, beta)");
  cmd_sweep->add_option("--dim", sw.dim)->check(CLI::IsMember({1, 3}))->capture_default_str();
  cmd_sweep->add_option("--alphas", sw.alphas)->delimiter(',')->check(CLI::PositiveNumber);
  cmd_sweep->add_option("--betas", sw.betas)->delimiter(',')->check(CLI::PositiveNumber);
  cmd_sweep->add_option("--min-order", sw.min_order, "lower end of the accepted band");
  cmd_sweep->add_option("--max-order", sw.max_order, "upper end of the accepted band");
  add_model_flags(cmd_sweep, sw.model, false);

  StabilityOptions st;
  auto* cmd_st = app.add_subcommand("diffusion-stability", "l2 monotonicity of the diffusion part");
  cmd_st->add_option("--ratios", st.study.ratios, "k/h^2 values")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  cmd_st->add_option("--trials", st.study.trials)->check(CLI::PositiveNumber)->capture_default_str();
  cmd_st->add_option("--steps", st.study.steps)->check(CLI::PositiveNumber)->capture_default_str();
  cmd_st->add_option("--seed", st.study.seed)->capture_default_str();
  cmd_st->add_option("--n", st.study.n, "cells per axis")->check(CLI::Range(2, 4096))->capture_default_str();
  cmd_st->add_option("--dim", st.study.dim)->check(CLI::IsMember({1, 3}))->capture_default_str();
  cmd_st->add_option("--beta", st.study.beta)->check(CLI::PositiveNumber)->capture_default_str();
  cmd_st->add_option("--out", st.out, "write diffusion_stability.csv here");
  cmd_st->add_flag("--debug-negate-a33", st.negate_a33, "negate a33 to exercise the admissibility guard");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*cmd_tab) return verify_tableau(tab, out);
    if (*cmd_conv) return convergence(conv, out);
    if (*cmd_sweep) return sweep(sw, out);
    if (*cmd_st) return stability(st, out);
  } catch (const Usage& u) {
    err << "error: " << u.message << '\n';
    return kExitUsage;
  } catch (const Failure& f) {
    err << "failure: " << f.message << '\n';
    return kExitFailure;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "failure: " << e.what() << '\n';
    return kExitFailure;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace llg::cli
