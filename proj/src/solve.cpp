#include "spt/solve.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "parallel.hpp"
#include "spt/basis.hpp"
#include "spt/errors.hpp"
#include "spt/kernels.hpp"

namespace spt {

Solution::Solution(Matrix coeffs, Mesh mesh, QuadratureRule rule, std::shared_ptr<const ProblemSpec> spec)
    : coeffs_(std::move(coeffs)), mesh_(std::move(mesh)), rule_(std::move(rule)), spec_(std::move(spec)) {
  if (coeffs_.rows() != rule_.size() || coeffs_.cols() != mesh_.spatial_dofs())
    throw InvalidArgument("coefficient array does not match mesh and angular rule");
}

Vector lu_solve(const Matrix& a, std::span<const double> b) {
  if (!a.square()) throw InvalidArgument("lu_solve needs a square matrix");
  if (b.size() != a.rows()) throw InvalidArgument("lu_solve: right-hand side length does not match");
  return kernels::lu_substitute(kernels::lu_factor_parallel(a), b);
}

Solution make_solution(const GlobalSystem& system, std::span<const double> full) {
  const std::size_t n_sp = system.spatial_dofs();
  if (full.size() != system.size()) throw InvalidArgument("coefficient vector has the wrong length");
  Matrix coeffs(system.directions(), n_sp);
  std::copy(full.begin(), full.end(), coeffs.data());
  return Solution(std::move(coeffs), system.mesh, system.rule, system.spec);
}

Vector flatten(const Solution& sol) {
  const Matrix& c = sol.coeffs();
  return Vector(c.data(), c.data() + c.rows() * c.cols());
}

Solution solve_direct(const GlobalSystem& system) {
  const ReducedSystem red = reduce(system);
  Vector u_io;
  try {
    u_io = lu_solve(red.matrix, red.rhs);
  } catch (const SingularMatrixError& e) {
    const std::size_t g = system.idx_io[e.column()];
    const std::size_t m = g / system.spatial_dofs();
    const std::size_t n = g % system.spatial_dofs();
    throw SingularMatrixError(std::string(e.what()) + " (direction m = " + std::to_string(m) + ", mu = " +
                                  std::to_string(system.rule.node(m)) + ", spatial DOF n = " +
                                  std::to_string(n) + "; M may be too small)",
                              e.column());
  }
  const Vector full = reconstruct(system, u_io);
  return make_solution(system, full);
}

IterationResult solve_source_iteration(const GlobalSystem& system, double tol, int max_iter) {
  if (!(tol > 0.0)) throw InvalidArgument("source iteration needs tol > 0");
  if (max_iter < 1) throw InvalidArgument("source iteration needs max_iter >= 1");

  const std::size_t n_sp = system.spatial_dofs();
  const std::size_t dirs = system.directions();

  struct Pin {
    std::size_t n;
    double value;
  };
  std::vector<std::optional<Pin>> pins(dirs);
  for (std::size_t k = 0; k < system.idx_bc.size(); ++k) {
    const std::size_t g = system.idx_bc[k];
    pins[g / n_sp] = Pin{g % n_sp, system.bc_values[k]};
  }

  // Transport blocks with the inflow row replaced by the pinning equation.
  std::vector<kernels::LuFactors> factors(dirs);
  detail::parallel_for(dirs, [&](std::size_t m) {
    Matrix d = system.transport_blocks[m];
    if (pins[m]) {
      auto row = d.row(pins[m]->n);
      std::fill(row.begin(), row.end(), 0.0);
      row[pins[m]->n] = 1.0;
    }
    factors[m] = kernels::lu_factor_serial(std::move(d));
  });

  Vector u(system.size(), 0.0);
  Vector next(system.size(), 0.0);
  double update = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    // Scattering source S u = D u - A u with D the block diagonal of A + S.
    const Vector au = kernels::matvec_parallel(system.matrix_a, u);
    detail::parallel_for(dirs, [&](std::size_t m) {
      const std::span<const double> um(u.data() + m * n_sp, n_sp);
      const Vector du = multiply(system.transport_blocks[m], um);
      Vector rhs(n_sp);
      for (std::size_t i = 0; i < n_sp; ++i) {
        const std::size_t g = m * n_sp + i;
        rhs[i] = system.rhs[g] + du[i] - au[g];
      }
      if (pins[m]) rhs[pins[m]->n] = pins[m]->value;
      const Vector um_next = kernels::lu_substitute(factors[m], rhs);
      std::copy(um_next.begin(), um_next.end(), next.begin() + static_cast<std::ptrdiff_t>(m * n_sp));
    });

    update = 0.0;
    for (std::size_t g = 0; g < u.size(); ++g) update = std::max(update, std::abs(next[g] - u[g]));
    std::swap(u, next);
    if (system.scattering_free || update <= tol) return {make_solution(system, u), it, update};
  }
  throw IterationError("source iteration did not converge in " + std::to_string(max_iter) +
                           " iterations (last update " + std::to_string(update) + ")",
                       update, max_iter);
}

namespace {

struct Located {
  std::size_t element;
  std::vector<double> values;
};

Located locate_and_eval(const Solution& sol, double x) {
  const Mesh& mesh = sol.mesh();
  const std::size_t k = mesh.locate(x);
  const Element& el = mesh.element(k);
  double xi = el.to_reference(x);
  if (x == el.a()) xi = -1.0;
  if (x == el.b()) xi = 1.0;
  xi = std::clamp(xi, -1.0, 1.0);
  Located out{k, std::vector<double>(static_cast<std::size_t>(mesh.degree()) + 1)};
  reference_basis(mesh.degree(), xi, out.values);
  return out;
}

double combine(const Solution& sol, const Located& loc, std::size_t m) {
  const auto row = sol.coeffs().row(m);
  double s = 0.0;
  for (std::size_t i = 0; i < loc.values.size(); ++i) s += row[sol.mesh().global_index(loc.element, i)] * loc.values[i];
  return s;
}

}  // namespace

double eval_angular_flux(const Solution& sol, double x, std::size_t m) {
  if (m >= sol.rule().size())
    throw InvalidArgument("angular index " + std::to_string(m) + " outside 0.." + std::to_string(sol.m_deg()));
  return combine(sol, locate_and_eval(sol, x), m);
}

Vector eval_all_directions(const Solution& sol, double x) {
  const Located loc = locate_and_eval(sol, x);
  Vector out(sol.rule().size());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = combine(sol, loc, m);
  return out;
}

double scalar_flux(const Solution& sol, double x) {
  const Vector phi = eval_all_directions(sol, x);
  double u = 0.0;
  for (std::size_t m = 0; m < phi.size(); ++m) u += sol.rule().weight(m) * phi[m];
  return u;
}

double relative_residual(const GlobalSystem& system, const Solution& sol) {
  const Vector u = flatten(sol);
  const Vector au = kernels::matvec_parallel(system.matrix_a, u);
  double worst = 0.0;
  for (std::size_t g : system.idx_io) worst = std::max(worst, std::abs(au[g] - system.rhs[g]));
  return worst / (norm_inf(system.matrix_a) * max_abs(u) + max_abs(system.rhs));
}

}  // namespace spt
