#include "spt/basis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spt/errors.hpp"
#include "spt/orthopoly.hpp"

namespace spt {

Element::Element(double a, double b) : a_(a), b_(b) {
  if (!(a < b)) throw InvalidArgument("element needs a < b");
}

BasisSet::BasisSet(int n_deg, Element element) : n_deg_(n_deg), element_(element) {
  if (n_deg < 1) throw InvalidArgument("basis degree must be at least 1");
}

void reference_basis(int n_deg, double xi, std::span<double> values, std::span<double> derivs) {
  const std::size_t n = static_cast<std::size_t>(n_deg);
  // L_0 .. L_{N+1}
  std::vector<double> leg(n + 2);
  legendre_table(xi, leg);

  values[0] = 0.5 * (1.0 - xi);
  values[n] = 0.5 * (1.0 + xi);
  for (std::size_t k = 1; k < n; ++k)
    values[k] = (leg[k - 1] - leg[k + 1]) / std::sqrt(4.0 * k + 2.0);

  if (derivs.empty()) return;
  derivs[0] = -0.5;
  derivs[n] = 0.5;
  for (std::size_t k = 1; k < n; ++k)
    derivs[k] = -(2.0 * k + 1.0) * leg[k] / std::sqrt(4.0 * k + 2.0);
}

namespace {

void check_index(const BasisSet& set, int n) {
  if (n < 0 || n > set.degree())
    throw InvalidArgument("basis index " + std::to_string(n) + " outside 0.." +
                          std::to_string(set.degree()));
}

}  // namespace

double basis_eval(const BasisSet& set, int n, double x) {
  check_index(set, n);
  const double xi = set.element().to_reference(x);
  const int big_n = set.degree();
  if (n == 0) return 0.5 * (1.0 - xi);
  if (n == big_n) return 0.5 * (1.0 + xi);
  return (legendre_eval(n - 1, xi) - legendre_eval(n + 1, xi)) / std::sqrt(4.0 * n + 2.0);
}

double basis_deriv(const BasisSet& set, int n, double x) {
  check_index(set, n);
  const double xi = set.element().to_reference(x);
  const int big_n = set.degree();
  double d;
  if (n == 0)
    d = -0.5;
  else if (n == big_n)
    d = 0.5;
  else
    d = -(2.0 * n + 1.0) * legendre_eval(n, xi) / std::sqrt(4.0 * n + 2.0);
  return d / set.element().jacobian();
}

Matrix bhat_matrix(const BasisSet& set) {
  // The jacobian cancels, so Bhat is the reference-element matrix.
  const std::size_t n = set.size();
  const auto rule = gauss_rule(n + 1);
  Matrix bhat(n, n);
  std::vector<double> val(n), der(n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    reference_basis(set.degree(), rule.node(q), val, der);
    const double w = rule.weight(q);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) bhat(i, j) += w * der[j] * val[i];
  }
  return bhat;
}

ElementQuadrature element_quadrature(const Element& element, std::span<const double> breakpoints,
                                     std::size_t points_per_piece) {
  std::vector<double> cuts{element.a()};
  for (double bp : breakpoints)
    if (bp > element.a() && bp < element.b()) cuts.push_back(bp);
  cuts.push_back(element.b());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const auto rule = gauss_rule(points_per_piece);
  ElementQuadrature quad;
  quad.x.reserve(rule.size() * (cuts.size() - 1));
  quad.w.reserve(rule.size() * (cuts.size() - 1));
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double mid = 0.5 * (cuts[p] + cuts[p + 1]);
    const double half = 0.5 * (cuts[p + 1] - cuts[p]);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      quad.x.push_back(mid + half * rule.node(q));
      quad.w.push_back(half * rule.weight(q));
    }
  }
  return quad;
}

Matrix weighted_mass_matrix(const BasisSet& set, const SpatialFunction& g, std::size_t n_quad) {
  const std::size_t n = set.size();
  if (n_quad < n) throw InvalidArgument("weighted_mass_matrix needs n_quad >= N+1");
  const auto quad = element_quadrature(set.element(), g.breakpoints, n_quad);

  Matrix mass(n, n);
  std::vector<double> val(n);
  for (std::size_t q = 0; q < quad.x.size(); ++q) {
    reference_basis(set.degree(), set.element().to_reference(quad.x[q]), val);
    const double wg = quad.w[q] * g.eval(quad.x[q]);
    for (std::size_t i = 0; i < n; ++i) {
      const double wi = wg * val[i];
      for (std::size_t j = i; j < n; ++j) mass(i, j) += wi * val[j];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) mass(i, j) = mass(j, i);
  return mass;
}

Vector load_vector(const BasisSet& set, const SpatialFunction& f, std::size_t n_quad) {
  const std::size_t n = set.size();
  if (n_quad < n) throw InvalidArgument("load_vector needs n_quad >= N+1");
  const auto quad = element_quadrature(set.element(), f.breakpoints, n_quad);

  Vector load(n, 0.0);
  std::vector<double> val(n);
  for (std::size_t q = 0; q < quad.x.size(); ++q) {
    reference_basis(set.degree(), set.element().to_reference(quad.x[q]), val);
    const double wf = 0.5 * quad.w[q] * f.eval(quad.x[q]);
    for (std::size_t i = 0; i < n; ++i) load[i] += wf * val[i];
  }
  return load;
}

}  // namespace spt
