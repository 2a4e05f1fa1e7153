#include "spt/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <utility>

#include "parallel.hpp"
#include "spt/errors.hpp"

namespace spt {

using ast::Var;

Mesh::Mesh(std::vector<double> boundaries, int n_deg) : boundaries_(std::move(boundaries)), n_deg_(n_deg) {
  if (n_deg_ < 1) throw InvalidArgument("spatial degree N must be at least 1");
  if (boundaries_.size() < 2) throw InvalidArgument("a mesh needs at least one element");
  elements_.reserve(boundaries_.size() - 1);
  for (std::size_t k = 0; k + 1 < boundaries_.size(); ++k) {
    if (!(boundaries_[k] < boundaries_[k + 1]))
      throw InvalidArgument("element boundaries must be strictly increasing");
    elements_.emplace_back(boundaries_[k], boundaries_[k + 1]);
  }
}

Mesh Mesh::uniform(double a, double b, std::size_t n_elements, int n_deg) {
  if (n_elements == 0) throw InvalidArgument("a mesh needs at least one element");
  std::vector<double> bounds(n_elements + 1);
  for (std::size_t k = 0; k <= n_elements; ++k)
    bounds[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n_elements);
  bounds.back() = b;
  return Mesh(std::move(bounds), n_deg);
}

Mesh Mesh::fitted(const ProblemSpec& spec, int n_deg) {
  std::vector<double> bounds{spec.x_left};
  for (double bp : spec.material_breakpoints()) bounds.push_back(bp);
  bounds.push_back(spec.x_right);
  return Mesh(std::move(bounds), n_deg);
}

std::size_t Mesh::locate(double x) const {
  if (!(x >= left() && x <= right()))
    throw DomainError("x = " + std::to_string(x) + " is outside [" + std::to_string(left()) + ", " +
                      std::to_string(right()) + "]");
  const auto it = std::lower_bound(boundaries_.begin() + 1, boundaries_.end() - 1, x);
  return static_cast<std::size_t>(it - (boundaries_.begin() + 1));
}

MaskIndices mask_indices(int n_deg, int m_deg, const Mesh& mesh) {
  if (n_deg != mesh.degree()) throw InvalidArgument("mesh degree does not match N");
  if (m_deg < 1) throw InvalidArgument("angular degree M must be at least 1");
  const std::size_t n_sp = mesh.spatial_dofs();
  const std::size_t dirs = static_cast<std::size_t>(m_deg) + 1;
  const std::size_t n_side = dirs / 2;  // floor((M+1)/2) nodes on each side of zero

  MaskIndices out;
  out.bc.reserve(2 * n_side);
  out.io.reserve(n_sp * dirs - 2 * n_side);
  for (std::size_t m = 0; m < dirs; ++m) {
    std::size_t inflow = n_sp;  // none
    if (m < n_side)
      inflow = n_sp - 1;
    else if (m >= dirs - n_side)
      inflow = 0;
    for (std::size_t n = 0; n < n_sp; ++n) (n == inflow ? out.bc : out.io).push_back(m * n_sp + n);
  }
  return out;
}

namespace {

template <class Local>
Matrix assemble_blocks(const Mesh& mesh, Local&& local) {
  const std::size_t n_sp = mesh.spatial_dofs();
  Matrix g(n_sp, n_sp);
  for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
    const Matrix loc = local(mesh.basis(k));
    for (std::size_t i = 0; i < loc.rows(); ++i)
      for (std::size_t j = 0; j < loc.cols(); ++j) g(mesh.global_index(k, i), mesh.global_index(k, j)) += loc(i, j);
  }
  return g;
}

Vector assemble_load(const Mesh& mesh, const SpatialFunction& f) {
  Vector v(mesh.spatial_dofs(), 0.0);
  const std::size_t nq = default_quad_points(mesh.degree());
  for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
    const Vector loc = load_vector(mesh.basis(k), f, nq);
    for (std::size_t i = 0; i < loc.size(); ++i) v[mesh.global_index(k, i)] += loc[i];
  }
  return v;
}

bool on_boundary(const Mesh& mesh, double x) {
  const double tol = 1e-12 * std::max(1.0, std::abs(x));
  return std::any_of(mesh.boundaries().begin(), mesh.boundaries().end(),
                     [&](double b) { return std::abs(b - x) <= tol; });
}

void check_mesh(const ProblemSpec& spec, const Mesh& mesh) {
  const double tol = 1e-12 * std::max({1.0, std::abs(spec.x_left), std::abs(spec.x_right)});
  if (std::abs(mesh.left() - spec.x_left) > tol || std::abs(mesh.right() - spec.x_right) > tol)
    throw ConfigError("mesh does not span the problem domain [" + std::to_string(spec.x_left) + ", " +
                      std::to_string(spec.x_right) + "]");
  for (double bp : spec.material_breakpoints())
    if (!on_boundary(mesh, bp))
      throw ConfigError("coefficient breakpoint " + std::to_string(bp) + " is not an element boundary");
}

}  // namespace

Matrix assemble_streaming(const Mesh& mesh) {
  return assemble_blocks(mesh, [](const BasisSet& set) { return bhat_matrix(set); });
}

Matrix assemble_mass(const Mesh& mesh, const SpatialFunction& g) {
  const std::size_t nq = default_quad_points(mesh.degree());
  return assemble_blocks(mesh, [&](const BasisSet& set) { return weighted_mass_matrix(set, g, nq); });
}

GlobalSystem assemble(const ProblemSpec& spec, const Mesh& mesh, int m_deg) {
  spec.validate();
  if (m_deg < 1) throw ConfigError("angular degree M must be at least 1");
  check_mesh(spec, mesh);

  GlobalSystem sys;
  sys.n_deg = mesh.degree();
  sys.m_deg = m_deg;
  sys.mesh = mesh;
  sys.rule = gauss_rule(static_cast<std::size_t>(m_deg) + 1);
  sys.spec = std::make_shared<const ProblemSpec>(spec);

  const auto& rule = sys.rule;
  const std::size_t dirs = sys.directions();
  const std::size_t n_sp = mesh.spatial_dofs();

  const Matrix bglob = assemble_streaming(mesh);

  // Coefficient slices that do not vary with an angle are computed once.
  const bool t_mu = spec.sigma_t.depends_on(Var::mu);
  const bool s_mu = spec.sigma_s.depends_on(Var::mu);
  const bool s_nu = spec.sigma_s.depends_on(Var::nu);
  const bool f_mu = spec.source.depends_on(Var::mu);

  std::vector<Matrix> t_blocks(t_mu ? dirs : 1);
  detail::parallel_for(t_blocks.size(), [&](std::size_t m) {
    t_blocks[m] = assemble_mass(mesh, spec.sigma_t.slice(rule.node(m)));
  });

  const std::size_t s_rows = s_mu ? dirs : 1;
  const std::size_t s_cols = s_nu ? dirs : 1;
  std::vector<Matrix> s_blocks(s_rows * s_cols);
  detail::parallel_for(s_blocks.size(), [&](std::size_t idx) {
    const std::size_t m = idx / s_cols;
    const std::size_t n = idx % s_cols;
    s_blocks[idx] = assemble_mass(mesh, spec.sigma_s.slice(rule.node(m), rule.node(n)));
  });
  sys.scattering_free =
      std::all_of(s_blocks.begin(), s_blocks.end(), [](const Matrix& g) { return max_abs({g.data(), g.rows() * g.cols()}) == 0.0; });

  std::vector<Vector> loads(f_mu ? dirs : 1);
  detail::parallel_for(loads.size(), [&](std::size_t m) { loads[m] = assemble_load(mesh, spec.source.slice(rule.node(m))); });

  const std::size_t n_total = n_sp * dirs;
  sys.matrix_a = Matrix(n_total, n_total);
  sys.rhs.assign(n_total, 0.0);
  sys.transport_blocks.resize(dirs);

  detail::parallel_for(dirs, [&](std::size_t m) {
    const Matrix& t = t_blocks[t_mu ? m : 0];
    Matrix d(n_sp, n_sp);
    const double mu = rule.node(m);
    for (std::size_t i = 0; i < n_sp; ++i)
      for (std::size_t j = 0; j < n_sp; ++j) d(i, j) = mu * bglob(i, j) + t(i, j);

    for (std::size_t n = 0; n < dirs; ++n) {
      const Matrix& g = s_blocks[(s_mu ? m : 0) * s_cols + (s_nu ? n : 0)];
      const double scale = 0.5 * rule.weight(n);
      for (std::size_t i = 0; i < n_sp; ++i) {
        double* row = sys.matrix_a.row(m * n_sp + i).data() + n * n_sp;
        for (std::size_t j = 0; j < n_sp; ++j) row[j] = (m == n ? d(i, j) : 0.0) - scale * g(i, j);
      }
    }
    const Vector& f = loads[f_mu ? m : 0];
    std::copy(f.begin(), f.end(), sys.rhs.begin() + static_cast<std::ptrdiff_t>(m * n_sp));
    sys.transport_blocks[m] = std::move(d);
  });

  auto masks = mask_indices(sys.n_deg, m_deg, mesh);
  sys.idx_io = std::move(masks.io);
  sys.idx_bc = std::move(masks.bc);
  sys.bc_values = inflow_values(spec, rule);
  return sys;
}

ReducedSystem reduce(const GlobalSystem& system) {
  const auto& io = system.idx_io;
  const auto& bc = system.idx_bc;
  const Matrix& a = system.matrix_a;
  ReducedSystem out{Matrix(io.size(), io.size()), Vector(io.size())};
  const auto rows = static_cast<std::ptrdiff_t>(io.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto arow = a.row(io[i]);
    double* dst = out.matrix.row(i).data();
    for (std::size_t j = 0; j < io.size(); ++j) dst[j] = arow[io[j]];
    double r = system.rhs[io[i]];
    for (std::size_t k = 0; k < bc.size(); ++k) r -= arow[bc[k]] * system.bc_values[k];
    out.rhs[i] = r;
  }
  return out;
}

Vector reconstruct(const GlobalSystem& system, std::span<const double> solution_io) {
  if (solution_io.size() != system.idx_io.size()) throw InvalidArgument("reduced solution has the wrong length");
  Vector full(system.size(), 0.0);
  for (std::size_t i = 0; i < solution_io.size(); ++i) full[system.idx_io[i]] = solution_io[i];
  for (std::size_t k = 0; k < system.idx_bc.size(); ++k) full[system.idx_bc[k]] = system.bc_values[k];
  return full;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace

void dump_system_csv(const GlobalSystem& system, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_csv(dir / "A.csv");
    for (std::size_t i = 0; i < system.matrix_a.rows(); ++i) {
      const auto row = system.matrix_a.row(i);
      for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << fmt(row[j]);
      out << '\n';
    }
  }
  {
    auto out = open_csv(dir / "f.csv");
    out << "index,m,n,value\n";
    for (std::size_t i = 0; i < system.rhs.size(); ++i)
      out << i << ',' << i / system.spatial_dofs() << ',' << i % system.spatial_dofs() << ',' << fmt(system.rhs[i])
          << '\n';
  }
  {
    auto out = open_csv(dir / "idx_io.csv");
    out << "index\n";
    for (auto i : system.idx_io) out << i << '\n';
  }
  {
    auto out = open_csv(dir / "idx_bc.csv");
    out << "index,value\n";
    for (std::size_t k = 0; k < system.idx_bc.size(); ++k)
      out << system.idx_bc[k] << ',' << fmt(system.bc_values[k]) << '\n';
  }
}

}  // namespace spt
