#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spt/assembly.hpp"
#include "spt/problem.hpp"
#include "spt/solve.hpp"

namespace spt {

/// Reference scalar flux u(x); breakpoints refine the error quadrature.
struct FluxReference {
  std::function<double(double)> eval;
  std::vector<double> breakpoints;
};

/// Reference angular flux phi(x, mu).
struct AngularReference {
  std::function<double(double, double)> eval;
  std::vector<double> breakpoints;
};

/// From the problem's exact flux (or, failing that, the exact angular
/// solution integrated in mu). Throws ConfigError if neither is declared.
FluxReference exact_flux_reference(const ProblemSpec& spec);
AngularReference exact_angular_reference(const ProblemSpec& spec);

/// The scalar flux of a solution, and its angular flux interpolated in mu
/// through the Gauss nodes.
FluxReference flux_reference(const Solution& sol);
AngularReference angular_reference(const Solution& sol);

/// Error quadrature points per element and angular points for a solution.
std::size_t error_points_x(int n_deg, double quad_scale = 1.0);
std::size_t error_points_mu(int m_deg, double quad_scale = 1.0);

/// ||u_N^M - u_ref||_{L2(D)}.
double flux_l2_error(const Solution& sol, const FluxReference& reference, double quad_scale = 1.0);

/// ||phi - phi_N^M||_{L2(Lambda; L2(D))}, the numerical flux interpolated in mu.
double angular_l2_error(const Solution& sol, const AngularReference& reference, double quad_scale = 1.0);

/// sqrt(sum_i w_i |mu_i| (phi - phi_N^M)^2) at the outflow end of each direction.
double boundary_error(const Solution& sol, const AngularReference& reference);

/// <L_M psi, psi>_M = sum_m w_m psi_m . (A psi)_m for a full coefficient vector.
double discrete_bilinear_form(const GlobalSystem& system, std::span<const double> psi);

/// |||psi|||^2 = sum_m w_m ||psi(., mu_m)||^2, by tensor quadrature.
double tensor_norm_sq(const Solution& sol);

enum class SweepParam { n, m };

struct ConvergenceRow {
  int param = 0;
  int n_deg = 0;
  int m_deg = 0;
  std::size_t elements = 0;
  std::size_t dof = 0;
  double flux_l2_error = 0.0;
  std::optional<double> angular_l2_error;
  std::optional<double> boundary_error;
  double wall_time_ms = 0.0;
  bool failed = false;
  std::string failure;
};

struct ConvergenceTable {
  SweepParam param = SweepParam::n;
  std::vector<ConvergenceRow> rows;
  std::optional<double> fitted_order;
  bool spectral_flag = false;

  /// Header "param,N,M,E,dof,flux_l2_error,boundary_error,wall_time_ms".
  std::string to_csv(bool with_time = true) const;
  std::string to_json(bool with_time = true) const;
};

/// Where the reference flux of a study comes from.
struct ReferenceSpec {
  enum class Kind { exact, fixture, self };
  Kind kind = Kind::exact;
  std::filesystem::path path;
  int n_ref = 0;
  int m_ref = 0;

  /// "exact", "fixture:PATH" or "self:N,M". Throws ConfigError.
  static ReferenceSpec parse(std::string_view text);
};

struct StudyConfig {
  SweepParam param = SweepParam::n;
  std::vector<int> values;
  int fixed_n = 8;
  int fixed_m = 7;
  /// Element boundaries; empty means boundaries at the material breakpoints.
  std::vector<double> boundaries;
  ReferenceSpec reference;
  /// Upper bound on concurrently solved rows; 0 runs them in sequence.
  int threads = 1;
};

/// One direct solve per swept value. A row whose solve fails is marked
/// failed and the sweep continues.
ConvergenceTable convergence_study(const ProblemSpec& spec, const StudyConfig& config);

/// Least-squares slope of log(error) against log(N) (log(M+1) for angular
/// sweeps) over non-failed rows with error > 1e-13. Needs three such rows;
/// throws AnalysisError otherwise.
double fit_order(const ConvergenceTable& table);

/// Mesh for N given explicit boundaries, or the breakpoint-fitted mesh.
Mesh make_mesh(const ProblemSpec& spec, int n_deg, const std::vector<double>& boundaries);

/// Persisted reference solution: comment header with problem, N_ref, M_ref,
/// element boundaries, quadrature density and an FNV-1a checksum of the data
/// lines, then "m,n,coeff" rows.
void write_fixture(const Solution& sol, const std::filesystem::path& path);

/// Reads a fixture written for `spec`. Throws ConfigError on a malformed
/// file, checksum mismatch or a different problem name.
Solution read_fixture(const std::filesystem::path& path, const ProblemSpec& spec);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace spt
