#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace llg {

/// Dense row-major s x s coefficient matrix.
class CoefficientMatrix {
 public:
  CoefficientMatrix() = default;
  explicit CoefficientMatrix(int s) : s_(s), a_(static_cast<std::size_t>(s) * s, 0.0) {}

  int size() const noexcept { return s_; }
  double& operator()(int i, int j) noexcept { return a_[static_cast<std::size_t>(i) * s_ + j]; }
  double operator()(int i, int j) const noexcept { return a_[static_cast<std::size_t>(i) * s_ + j]; }

  friend bool operator==(const CoefficientMatrix&, const CoefficientMatrix&) = default;

 private:
  int s_ = 0;
  std::vector<double> a_;
};

/// Coupled explicit/implicit Butcher tableau of an IMEX Runge-Kutta method.
/// Stage indices are 0-based here: stage 0 is the trivial first stage.
struct ImexTableau {
  int s = 0;
  CoefficientMatrix a_implicit;  // lower triangular, first row zero
  CoefficientMatrix a_explicit;  // strictly lower triangular
  std::vector<double> b;
  std::vector<double> b_tilde;
  std::vector<double> c;
  std::vector<double> c_tilde;

  /// Zero tableau with s stages.
  static ImexTableau zeros(int s);
};

/// Slack of the three diffusion-stability inequalities of a 4-stage DIRK
/// pair; the scheme is admissible iff all three are strictly positive.
struct StabilityMargins {
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;

  bool admissible() const noexcept { return m2 > 0.0 && m3 > 0.0 && m4 > 0.0; }
};

struct OrderResidual {
  std::string name;
  int order = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs|
};

struct StructureCheck {
  std::string name;
  bool passed = true;
  double residual = 0.0;
  /// Shape checks make the coefficient sums meaningless when they fail;
  /// family checks (b = b~, c = c~, positive diagonal, row sums) do not.
  bool shape = false;
};

struct StructureReport {
  std::vector<StructureCheck> checks;

  bool passed() const noexcept;
  bool shape_passed() const noexcept;
  double max_residual() const noexcept;
  /// Names of failed checks, comma separated.
  std::string failures() const;
};

inline constexpr double kRowSumTolerance = 1e-7;

/// The 4-stage third-order pair with positive stability margins, coefficients
/// kept at eight significant figures.
ImexTableau default_tableau();

StructureReport validate_structure(const ImexTableau& t);

/// Every order condition up to `order` (1..3) for the coupled pair: 2 first,
/// 4 second and 14 third-order conditions. Throws InvalidTableau when the
/// tableau is malformed (sizes, triangularity).
std::vector<OrderResidual> order_residuals(const ImexTableau& t, int order);

/// The five conditions that remain once b = b~ and c = c~ with a zero first
/// stage: sum b, sum b c, sum b A~ c, sum b c^2, sum b A c.
std::vector<OrderResidual> reduced_residuals(const ImexTableau& t);

/// Throws Unsupported unless s == 4.
StabilityMargins stability_margins(const ImexTableau& t);

struct SearchOptions {
  int max_restarts = 200;
  int max_iterations = 60;
  /// Margins must exceed this floor for a candidate to be accepted.
  double margin_floor = 1e-3;
  /// Start the first attempt from this tableau instead of a random point.
  std::optional<ImexTableau> initial_guess;
};

/// Finds a 4-stage pair with b = b~ = last implicit row, c = c~, reduced
/// order residuals below `tol` and positive stability margins. Minimum-norm
/// Gauss-Newton projection from seeded random starts; deterministic per seed.
/// Throws SearchFailure when the restart budget is exhausted.
ImexTableau search_tableau(std::uint64_t seed, double tol,
                           const SearchOptions& options = {});

/// Plain-text tableau format, one `key = values` entry per line:
///   s = 4
///   A = <row>           (s lines, implicit matrix)
///   A_explicit = <row>  (s lines)
///   b = ...             b_explicit = ... (optional, defaults to b)
///   c = ...             c_explicit = ... (optional, defaults to c)
/// Blank lines and '#' comments are ignored. Throws ParseError.
ImexTableau parse_tableau(std::istream& in);
ImexTableau load_tableau(const std::string& path);
void write_tableau(std::ostream& os, const ImexTableau& t);

/// CSV with header condition_name,lhs,rhs,residual.
void write_residual_csv(std::ostream& os,
                        const std::vector<OrderResidual>& residuals);

}  // namespace llg
