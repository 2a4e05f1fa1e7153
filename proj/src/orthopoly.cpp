#include "spt/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spt/errors.hpp"

namespace spt {

LegendrePair legendre_pair(int n, double x) {
  if (n < 0) throw InvalidArgument("legendre degree must be non-negative");
  if (n == 0) return {1.0, 0.0};

  double p_prev = 1.0;  // L_{k-1}
  double p = x;         // L_k
  double d_prev = 0.0;  // L'_{k-1}
  double d = 1.0;       // L'_k
  for (int k = 1; k < n; ++k) {
    const double p_next = ((2 * k + 1) * x * p - k * p_prev) / (k + 1);
    const double d_next = d_prev + (2 * k + 1) * p;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
  }
  return {p, d};
}

double legendre_eval(int n, double x) { return legendre_pair(n, x).value; }

double legendre_deriv(int n, double x) { return legendre_pair(n, x).deriv; }

void legendre_table(double x, std::span<double> values) {
  if (values.empty()) return;
  values[0] = 1.0;
  if (values.size() == 1) return;
  values[1] = x;
  for (std::size_t k = 1; k + 1 < values.size(); ++k) {
    const double kk = static_cast<double>(k);
    values[k + 1] = ((2 * kk + 1) * x * values[k] - kk * values[k - 1]) / (kk + 1);
  }
}

QuadratureRule::QuadratureRule(std::vector<double> nodes, std::vector<double> weights)
    : nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (nodes_.empty() || nodes_.size() != weights_.size())
    throw InvalidArgument("quadrature rule needs matching, non-empty nodes and weights");
  // For Gauss points the barycentric weights are (-1)^i sqrt((1 - x_i^2) w_i).
  bary_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double mag = std::sqrt((1.0 - nodes_[i] * nodes_[i]) * weights_[i]);
    bary_[i] = (i % 2 == 0) ? mag : -mag;
  }
}

QuadratureRule gauss_rule(std::size_t n_pts) {
  if (n_pts == 0) throw InvalidArgument("gauss_rule needs at least one point");
  const int n = static_cast<int>(n_pts);
  std::vector<double> nodes(n_pts);
  std::vector<double> weights(n_pts);

  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (4.0 * i + 3.0) / (4.0 * n + 2.0));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_pair(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    const double dp = legendre_pair(n, x).deriv;
    // Guesses run from the right end leftwards; store ascending.
    nodes[n - 1 - i] = x;
    weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }

  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (nodes[j] - nodes[i]);
    const double w = 0.5 * (weights[i] + weights[j]);
    nodes[i] = -x;
    nodes[j] = x;
    weights[i] = w;
    weights[j] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;

  return QuadratureRule(std::move(nodes), std::move(weights));
}

void lagrange_weights(const QuadratureRule& rule, double x, std::span<double> out) {
  const auto nodes = rule.nodes();
  const auto bary = rule.barycentric();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (x == nodes[i]) {
      std::fill(out.begin(), out.end(), 0.0);
      out[i] = 1.0;
      return;
    }
  }
  double denom = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out[i] = bary[i] / (x - nodes[i]);
    denom += out[i];
  }
  for (auto& v : out) v /= denom;
}

double interpolate_at_nodes(std::span<const double> values, const QuadratureRule& rule, double x) {
  if (values.size() != rule.size())
    throw InvalidArgument("interpolate_at_nodes: value count does not match the rule");
  const auto nodes = rule.nodes();
  const auto bary = rule.barycentric();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double diff = x - nodes[i];
    if (diff == 0.0) return values[i];
    const double t = bary[i] / diff;
    num += t * values[i];
    den += t;
  }
  return num / den;
}

}  // namespace spt
