#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spt/matrix.hpp"

namespace spt::kernels {

/// Packed P A = L U with unit lower L; pivots[k] is the row swapped into
/// position k at step k.
struct LuFactors {
  Matrix lu;
  std::vector<std::size_t> pivots;
};

/// Pivots smaller than this are treated as zero.
inline constexpr double kPivotFloor = 1e-300;

/// Unblocked right-looking elimination with partial pivoting, single thread.
/// Kept as the reference the parallel kernel is tested against.
LuFactors lu_factor_serial(Matrix a);

/// Blocked right-looking elimination with partial pivoting; the trailing
/// update is split across OpenMP threads. Same pivot rule as the serial kernel.
LuFactors lu_factor_parallel(Matrix a, std::size_t block = 64);

/// Solves with existing factors.
Vector lu_substitute(const LuFactors& factors, std::span<const double> b);

Vector matvec_serial(const Matrix& a, std::span<const double> x);
Vector matvec_parallel(const Matrix& a, std::span<const double> x);

}  // namespace spt::kernels
