#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spt/basis.hpp"
#include "spt/exprs.hpp"
#include "spt/orthopoly.hpp"

namespace spt {

/// Expression in (x, mu, nu) plus the spatial breakpoints where it is not smooth.
class Coefficient {
 public:
  Coefficient() = default;
  explicit Coefficient(Expr expr, std::vector<double> extra_breakpoints = {});

  static Coefficient parse(std::string_view text, std::vector<double> extra_breakpoints = {});

  double operator()(double x, double mu = 0.0, double nu = 0.0) const { return expr_.eval(x, mu, nu); }

  const Expr& expr() const noexcept { return expr_; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  bool depends_on(ast::Var var) const { return expr_.depends_on(var); }

  /// The x-slice at fixed (mu, nu), ready for composite quadrature.
  SpatialFunction slice(double mu, double nu = 0.0) const;

 private:
  Expr expr_;
  std::vector<double> breakpoints_;
};

/// Inflow boundary data g(mu). Either an expression in mu, an explicit table
/// of values at the inflow nodes (ascending node order), or the index ramp
/// g(mu_i) = M - i used for the linearly varying inflow problem.
class InflowData {
 public:
  enum class Kind { expression, table, index_ramp };

  InflowData() : InflowData(Coefficient()) {}
  explicit InflowData(Coefficient g) : kind_(Kind::expression), expr_(std::move(g)) {}
  static InflowData table(std::vector<double> values);
  static InflowData index_ramp();

  Kind kind() const noexcept { return kind_; }
  const Coefficient& expression() const noexcept { return expr_; }
  const std::vector<double>& values() const noexcept { return table_; }

  /// Value at node `i` of `rule`; `slot` is the position of that node among
  /// the inflow nodes of this side, `n_slots` how many there are.
  double value(const QuadratureRule& rule, std::size_t i, std::size_t slot, std::size_t n_slots) const;

  bool is_zero() const;

 private:
  Kind kind_;
  Coefficient expr_;
  std::vector<double> table_;
};

/// Steady one-group slab transport problem
///   mu dphi/dx + sigma_t phi - 1/2 int sigma_s(x, nu, mu) phi(x, nu) dnu = 1/2 s(x, mu)
/// on (x_left, x_right) with inflow data g_left (mu > 0) and g_right (mu < 0).
struct ProblemSpec {
  std::string name;
  std::string description;
  double x_left = -1.0;
  double x_right = 1.0;
  Coefficient sigma_t;
  Coefficient sigma_s;
  Coefficient source;
  InflowData g_left;
  InflowData g_right;
  std::optional<double> coercivity_c;
  std::optional<Coefficient> exact_solution;  // phi(x, mu)
  std::optional<Coefficient> exact_flux;      // u(x) = int phi dmu

  /// Breakpoints of sigma_t and sigma_s strictly inside the domain; these
  /// must be element boundaries.
  std::vector<double> material_breakpoints() const;

  /// Checks domain ordering and the free variables of every coefficient.
  /// Throws ConfigError.
  void validate() const;
};

std::vector<std::string> catalog_names();

/// Built-in problems ex1 .. ex7. Throws NotFound listing the valid names.
ProblemSpec catalog(std::string_view name);

/// Problem JSON document (see README for the schema). Throws ConfigError.
ProblemSpec problem_from_json(std::string_view json_text);
ProblemSpec load_problem(const std::filesystem::path& path);

/// Catalog name or path to a JSON file.
ProblemSpec resolve_problem(std::string_view name_or_path);

/// Prescribed inflow values in mask order: g_right at the negative nodes
/// 0 .. floor((M-1)/2), then g_left at the positive nodes ceil((M+1)/2) .. M.
std::vector<double> inflow_values(const ProblemSpec& spec, const QuadratureRule& rule);

struct CheckResult {
  bool passed = false;
  double worst = 0.0;  // smallest margin / largest residual seen
  std::string detail;
};

/// Spot check of sigma_t - 1/2 int sigma_s dnu >= c at random (x, mu).
CheckResult check_coercivity(const ProblemSpec& spec, int samples = 50, std::uint64_t seed = 12345);

/// Substitutes the exact solution into the strong equation at random points
/// away from breakpoints; residual measured relative to 1 + |s/2|.
CheckResult check_exact_residual(const ProblemSpec& spec, int samples = 100, std::uint64_t seed = 6789,
                                 double tolerance = 1e-9);

}  // namespace spt
