#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "spt/matrix.hpp"

namespace spt {

/// Interval [a, b] with the affine map x(xi) = (a+b)/2 + (b-a)/2 xi.
class Element {
 public:
  Element(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double jacobian() const noexcept { return 0.5 * (b_ - a_); }
  double midpoint() const noexcept { return 0.5 * (a_ + b_); }

  double to_reference(double x) const noexcept { return (x - midpoint()) / jacobian(); }
  double to_physical(double xi) const noexcept { return midpoint() + jacobian() * xi; }

  bool operator==(const Element&) const = default;

 private:
  double a_;
  double b_;
};

/// Modal basis of degree N on one element: boundary hats Phi_0, Phi_N and
/// interior bubbles Phi_n = (L_{n-1} - L_{n+1}) / sqrt(4n+2), 0 < n < N.
class BasisSet {
 public:
  BasisSet(int n_deg, Element element);

  int degree() const noexcept { return n_deg_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_deg_) + 1; }
  const Element& element() const noexcept { return element_; }

 private:
  int n_deg_;
  Element element_;
};

/// All N+1 reference basis values at xi into `values`; derivatives w.r.t. xi
/// into `derivs` when it is non-empty.
void reference_basis(int n_deg, double xi, std::span<double> values, std::span<double> derivs = {});

double basis_eval(const BasisSet& set, int n, double x);

/// d Phi_n / dx (physical coordinate).
double basis_deriv(const BasisSet& set, int n, double x);

/// Bhat(i, j) = int Phi_j' Phi_i dx over the element.
Matrix bhat_matrix(const BasisSet& set);

/// Coefficient restricted to one spatial variable; breakpoints split the
/// composite quadrature.
struct SpatialFunction {
  std::function<double(double)> eval;
  std::vector<double> breakpoints;
};

/// Default Gauss points per smooth piece for coefficient integrals.
inline std::size_t default_quad_points(int n_deg) { return static_cast<std::size_t>(n_deg) + 9; }

/// Quadrature points and weights (physical coordinates) covering the element,
/// composite over the pieces cut by `breakpoints`.
struct ElementQuadrature {
  std::vector<double> x;
  std::vector<double> w;
};

ElementQuadrature element_quadrature(const Element& element, std::span<const double> breakpoints,
                                     std::size_t points_per_piece);

/// M(i, j) = int g Phi_j Phi_i dx, symmetric.
Matrix weighted_mass_matrix(const BasisSet& set, const SpatialFunction& g, std::size_t n_quad);

/// v(i) = 1/2 int f Phi_i dx.
Vector load_vector(const BasisSet& set, const SpatialFunction& f, std::size_t n_quad);

}  // namespace spt
