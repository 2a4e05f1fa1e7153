#pragma once

#include <cstddef>
#include <memory>
#include <span>

#include "spt/assembly.hpp"
#include "spt/matrix.hpp"
#include "spt/orthopoly.hpp"
#include "spt/problem.hpp"

namespace spt {

/// Modal coefficients phi_hat(m, n) of the discrete angular flux, one row per
/// angular node, E*N+1 columns in global C0 numbering.
class Solution {
 public:
  Solution(Matrix coeffs, Mesh mesh, QuadratureRule rule, std::shared_ptr<const ProblemSpec> spec);

  const Matrix& coeffs() const noexcept { return coeffs_; }
  const Mesh& mesh() const noexcept { return mesh_; }
  const QuadratureRule& rule() const noexcept { return rule_; }
  const ProblemSpec& spec() const noexcept { return *spec_; }
  std::shared_ptr<const ProblemSpec> spec_ptr() const noexcept { return spec_; }

  int n_deg() const noexcept { return mesh_.degree(); }
  int m_deg() const noexcept { return static_cast<int>(rule_.size()) - 1; }

 private:
  Matrix coeffs_;
  Mesh mesh_;
  QuadratureRule rule_;
  std::shared_ptr<const ProblemSpec> spec_;
};

/// Dense LU with partial pivoting. Throws SingularMatrixError with the column.
Vector lu_solve(const Matrix& a, std::span<const double> b);

/// Reduced solve; inflow DOFs are assigned from bc_values. A singular reduced
/// matrix is reported with the (m, n) of the offending column.
Solution solve_direct(const GlobalSystem& system);

struct IterationResult {
  Solution solution;
  int iterations;
  double last_update;
};

/// Scattering-source iteration with per-direction transport solves.
/// Throws IterationError after max_iter sweeps without reaching tol.
IterationResult solve_source_iteration(const GlobalSystem& system, double tol, int max_iter);

/// Solution from a full coefficient vector (global ordering m*(E*N+1) + n).
Solution make_solution(const GlobalSystem& system, std::span<const double> full);

/// Flattened coefficients in global ordering.
Vector flatten(const Solution& sol);

/// phi_N^M(x, mu_m). Throws DomainError when x is outside the mesh.
double eval_angular_flux(const Solution& sol, double x, std::size_t m);

/// phi_N^M(x, mu_m) for every m.
Vector eval_all_directions(const Solution& sol, double x);

/// u(x) = sum_m w_m phi_N^M(x, mu_m).
double scalar_flux(const Solution& sol, double x);

/// max_i |(A u - f)_i| / (|A| |u| + |f|) over the idx_io rows.
double relative_residual(const GlobalSystem& system, const Solution& sol);

}  // namespace spt
