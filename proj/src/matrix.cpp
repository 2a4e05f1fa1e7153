#include "spt/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "spt/kernels.hpp"

namespace spt {

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Vector multiply(const Matrix& a, std::span<const double> x) { return kernels::matvec_serial(a, x); }

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

double norm_inf(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (double e : a.row(i)) s += std::abs(e);
    m = std::max(m, s);
  }
  return m;
}

}  // namespace spt
