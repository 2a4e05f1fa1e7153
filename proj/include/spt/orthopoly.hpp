#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spt {

/// Value and first derivative of a Legendre polynomial at one point.
struct LegendrePair {
  double value;
  double deriv;
};

/// L_n(x) by the three-term recurrence.
double legendre_eval(int n, double x);

/// L_n'(x), using (2k+1) L_k = L_{k+1}' - L_{k-1}' so that it stays finite at x = +-1.
double legendre_deriv(int n, double x);

/// L_n(x) and L_n'(x) in one recurrence pass.
LegendrePair legendre_pair(int n, double x);

/// Fills values[k] = L_k(x) for k = 0 .. values.size()-1.
void legendre_table(double x, std::span<double> values);

/// Gauss-Legendre rule on (-1, 1): ascending nodes (the roots of L_n) and
/// their Christoffel weights. Immutable once built.
class QuadratureRule {
 public:
  QuadratureRule() = default;
  QuadratureRule(std::vector<double> nodes, std::vector<double> weights);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  /// Barycentric weights for interpolation through the nodes.
  std::span<const double> barycentric() const noexcept { return bary_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> bary_;
};

/// n_pts-point Gauss-Legendre rule. Throws InvalidArgument for n_pts == 0.
QuadratureRule gauss_rule(std::size_t n_pts);

/// Sum_i w_i f(x_i) over the nodes of `rule`.
template <class F>
double quad_integrate(F&& f, const QuadratureRule& rule) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weight(i) * f(rule.node(i));
  return sum;
}

/// Evaluates the degree size()-1 interpolant of (node[i], values[i]) at x
/// using the barycentric formula.
double interpolate_at_nodes(std::span<const double> values, const QuadratureRule& rule, double x);

/// Cardinal (Lagrange) functions l_i(x) of the rule, written into `out`.
void lagrange_weights(const QuadratureRule& rule, double x, std::span<double> out);

}  // namespace spt
