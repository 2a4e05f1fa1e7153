#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "spt/basis.hpp"
#include "spt/matrix.hpp"
#include "spt/orthopoly.hpp"
#include "spt/problem.hpp"

namespace spt {

/// Contiguous elements with a common spatial degree N. Global C0 numbering:
/// local mode n of element k is spatial DOF k*N + n, so neighbouring hats share
/// a DOF and the whole mesh carries E*N + 1 spatial DOFs.
class Mesh {
 public:
  Mesh() : Mesh({0.0, 1.0}, 1) {}
  Mesh(std::vector<double> boundaries, int n_deg);

  static Mesh single(double a, double b, int n_deg) { return Mesh({a, b}, n_deg); }
  static Mesh uniform(double a, double b, std::size_t n_elements, int n_deg);
  /// Element boundaries at the material breakpoints of `spec`, one element otherwise.
  static Mesh fitted(const ProblemSpec& spec, int n_deg);

  int degree() const noexcept { return n_deg_; }
  std::size_t num_elements() const noexcept { return elements_.size(); }
  const Element& element(std::size_t k) const { return elements_[k]; }
  BasisSet basis(std::size_t k) const { return BasisSet(n_deg_, elements_[k]); }
  const std::vector<double>& boundaries() const noexcept { return boundaries_; }
  double left() const noexcept { return boundaries_.front(); }
  double right() const noexcept { return boundaries_.back(); }

  std::size_t spatial_dofs() const noexcept { return num_elements() * static_cast<std::size_t>(n_deg_) + 1; }
  std::size_t global_index(std::size_t k, std::size_t local) const noexcept {
    return k * static_cast<std::size_t>(n_deg_) + local;
  }

  /// Element containing x (the left one at an interface). Throws DomainError.
  std::size_t locate(double x) const;

  bool operator==(const Mesh&) const = default;

 private:
  std::vector<double> boundaries_;
  std::vector<Element> elements_;
  int n_deg_;
};

/// Unknown (interior/outflow) and inflow index sets of the global vector,
/// where DOF n of direction m sits at m*(E*N+1) + n.
struct MaskIndices {
  std::vector<std::size_t> io;
  std::vector<std::size_t> bc;
};

/// Inflow DOF: right end for mu_m < 0, left end for mu_m > 0, none at mu = 0.
MaskIndices mask_indices(int n_deg, int m_deg, const Mesh& mesh);

/// Assembled A = B + T - S with load vector and inflow data.
struct GlobalSystem {
  Matrix matrix_a;
  Vector rhs;
  std::vector<std::size_t> idx_io;
  std::vector<std::size_t> idx_bc;
  Vector bc_values;  // aligned with idx_bc

  int n_deg = 0;
  int m_deg = 0;
  Mesh mesh;
  QuadratureRule rule;
  std::shared_ptr<const ProblemSpec> spec;

  /// Per-direction streaming + collision blocks mu_m Bhat + T_m.
  std::vector<Matrix> transport_blocks;
  bool scattering_free = false;

  std::size_t spatial_dofs() const noexcept { return mesh.spatial_dofs(); }
  std::size_t directions() const noexcept { return static_cast<std::size_t>(m_deg) + 1; }
  std::size_t size() const noexcept { return rhs.size(); }
  std::size_t index(std::size_t m, std::size_t n) const noexcept { return m * spatial_dofs() + n; }
  std::size_t dof() const noexcept { return idx_io.size(); }
};

/// Throws ConfigError when the mesh does not span the problem domain or a
/// material breakpoint is not an element boundary.
GlobalSystem assemble(const ProblemSpec& spec, const Mesh& mesh, int m_deg);

/// The global spatial matrices for one direction slice; exposed for tests.
Matrix assemble_streaming(const Mesh& mesh);
Matrix assemble_mass(const Mesh& mesh, const SpatialFunction& g);

struct ReducedSystem {
  Matrix matrix;
  Vector rhs;
};

/// [Q A Q^T] and Q (f - A R^T g).
ReducedSystem reduce(const GlobalSystem& system);

/// scatter(solution_io, idx_io) + scatter(bc_values, idx_bc).
Vector reconstruct(const GlobalSystem& system, std::span<const double> solution_io);

/// Writes A.csv, f.csv, idx_io.csv and idx_bc.csv into `dir`.
void dump_system_csv(const GlobalSystem& system, const std::filesystem::path& dir);

}  // namespace spt
