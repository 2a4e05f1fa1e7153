#include "spt/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "spt/errors.hpp"

namespace spt::kernels {

namespace {

void require_square(const Matrix& a) {
  if (!a.square()) throw InvalidArgument("LU factorisation needs a square matrix");
}

[[noreturn]] void throw_singular(std::size_t column, double pivot) {
  throw SingularMatrixError("matrix is singular: pivot " + std::to_string(pivot) + " in column " +
                                std::to_string(column),
                            column);
}

// Partial pivot search in column k over rows k..n-1; first maximum wins.
std::size_t find_pivot(const Matrix& a, std::size_t k) {
  std::size_t p = k;
  double best = std::abs(a(k, k));
  for (std::size_t i = k + 1; i < a.rows(); ++i) {
    const double v = std::abs(a(i, k));
    if (v > best) {
      best = v;
      p = i;
    }
  }
  return p;
}

void swap_rows(Matrix& a, std::size_t r1, std::size_t r2) {
  if (r1 == r2) return;
  auto x = a.row(r1);
  auto y = a.row(r2);
  std::swap_ranges(x.begin(), x.end(), y.begin());
}

}  // namespace

LuFactors lu_factor_serial(Matrix a) {
  require_square(a);
  const std::size_t n = a.rows();
  std::vector<std::size_t> pivots(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t p = find_pivot(a, k);
    if (!(std::abs(a(p, k)) >= kPivotFloor)) throw_singular(k, a(p, k));
    pivots[k] = p;
    swap_rows(a, k, p);

    const double inv = 1.0 / a(k, k);
    const double* urow = a.row(k).data();
    for (std::size_t i = k + 1; i < n; ++i) {
      double* __restrict row = a.row(i).data();
      row[k] *= inv;
      const double l = row[k];
      for (std::size_t j = k + 1; j < n; ++j) row[j] -= l * urow[j];
    }
  }
  return {std::move(a), std::move(pivots)};
}

LuFactors lu_factor_parallel(Matrix a, std::size_t block) {
  require_square(a);
  const std::size_t n = a.rows();
  const std::size_t nb = std::max<std::size_t>(block, 1);
  constexpr std::size_t tile = 512;
  std::vector<std::size_t> pivots(n);

  for (std::size_t k0 = 0; k0 < n; k0 += nb) {
    const std::size_t kend = std::min(k0 + nb, n);

    // Panel: columns k0..kend-1, every row below the diagonal.
    for (std::size_t k = k0; k < kend; ++k) {
      const std::size_t p = find_pivot(a, k);
      if (!(std::abs(a(p, k)) >= kPivotFloor)) throw_singular(k, a(p, k));
      pivots[k] = p;
      swap_rows(a, k, p);

      const double inv = 1.0 / a(k, k);
      const double* urow = a.row(k).data();
      for (std::size_t i = k + 1; i < n; ++i) {
        double* row = a.row(i).data();
        row[k] *= inv;
        const double l = row[k];
        for (std::size_t j = k + 1; j < kend; ++j) row[j] -= l * urow[j];
      }
    }
    if (kend == n) break;

    // U12 = L11^{-1} A12.
    for (std::size_t i = k0 + 1; i < kend; ++i) {
      double* row = a.row(i).data();
      for (std::size_t k = k0; k < i; ++k) {
        const double l = row[k];
        const double* urow = a.row(k).data();
        for (std::size_t j = kend; j < n; ++j) row[j] -= l * urow[j];
      }
    }

    // A22 -= L21 U12, tiled over columns so the U12 tile stays in cache.
    const auto rows_begin = static_cast<std::ptrdiff_t>(kend);
    const auto rows_end = static_cast<std::ptrdiff_t>(n);
    for (std::size_t j0 = kend; j0 < n; j0 += tile) {
      const std::size_t j1 = std::min(j0 + tile, n);
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t ii = rows_begin; ii < rows_end; ++ii) {
        double* __restrict row = a.row(static_cast<std::size_t>(ii)).data();
        std::size_t k = k0;
        for (; k + 4 <= kend; k += 4) {
          const double l0 = row[k], l1 = row[k + 1], l2 = row[k + 2], l3 = row[k + 3];
          const double* __restrict u0 = a.row(k).data();
          const double* __restrict u1 = a.row(k + 1).data();
          const double* __restrict u2 = a.row(k + 2).data();
          const double* __restrict u3 = a.row(k + 3).data();
          for (std::size_t j = j0; j < j1; ++j) row[j] -= l0 * u0[j] + l1 * u1[j] + l2 * u2[j] + l3 * u3[j];
        }
        for (; k < kend; ++k) {
          const double l = row[k];
          const double* __restrict urow = a.row(k).data();
          for (std::size_t j = j0; j < j1; ++j) row[j] -= l * urow[j];
        }
      }
    }
  }
  return {std::move(a), std::move(pivots)};
}

Vector lu_substitute(const LuFactors& factors, std::span<const double> b) {
  const Matrix& lu = factors.lu;
  const std::size_t n = lu.rows();
  if (b.size() != n) throw InvalidArgument("right-hand side length does not match the matrix");
  Vector x(b.begin(), b.end());
  for (std::size_t k = 0; k < n; ++k) std::swap(x[k], x[factors.pivots[k]]);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = lu.row(i).data();
    double s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= row[j] * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    const double* row = lu.row(i).data();
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= row[j] * x[j];
    x[i] = s / row[i];
  }
  return x;
}

Vector matvec_serial(const Matrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw InvalidArgument("matvec: dimension mismatch");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* row = a.row(i).data();
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

Vector matvec_parallel(const Matrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw InvalidArgument("matvec: dimension mismatch");
  Vector y(a.rows(), 0.0);
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const double* row = a.row(static_cast<std::size_t>(ii)).data();
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * x[j];
    y[static_cast<std::size_t>(ii)] = s;
  }
  return y;
}

}  // namespace spt::kernels
