#include <doctest.h>

#include <cmath>
#include <vector>

#include "spt/errors.hpp"
#include "spt/kernels.hpp"
#include "spt/solve.hpp"
#include "support.hpp"

using namespace spt;
using namespace spt::kernels;

namespace {

Matrix random_matrix(std::size_t n, double diag_boost = 0.0) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = testing::uniform(-1.0, 1.0) + (i == j ? diag_boost : 0.0);
  return a;
}

Vector random_vector(std::size_t n) {
  Vector v(n);
  for (auto& x : v) x = testing::uniform(-1.0, 1.0);
  return v;
}

double relative_residual(const Matrix& a, const Vector& x, const Vector& b) {
  const Vector ax = multiply(a, x);
  double r = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) r = std::max(r, std::abs(ax[i] - b[i]));
  return r / (norm_inf(a) * max_abs(x) + max_abs(b));
}

}  // namespace

TEST_CASE("lu_solve examples") {
  const Vector b{3.5, -1.0, 2.0};
  CHECK(lu_solve(Matrix::identity(3), b) == b);

  Matrix a(2, 2);
  a(0, 0) = 2;
  a(0, 1) = 1;
  a(1, 0) = 1;
  a(1, 1) = 3;
  const Vector x = lu_solve(a, Vector{3, 4});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(lu_solve(Matrix(3, 3), Vector(3, 1.0)), SingularMatrixError);
  CHECK_THROWS_AS(lu_solve(Matrix(2, 3), Vector(2)), InvalidArgument);
  CHECK_THROWS_AS(lu_solve(Matrix::identity(2), Vector(3)), InvalidArgument);
}

TEST_CASE("singular pivot reports its column") {
  Matrix a = Matrix::identity(4);
  a(2, 2) = 0.0;
  for (auto* factor : {+[](Matrix m) { return lu_factor_serial(std::move(m)); },
                       +[](Matrix m) { return lu_factor_parallel(std::move(m), 2); }}) {
    try {
      factor(a);
      FAIL("expected SingularMatrixError");
    } catch (const SingularMatrixError& e) {
      CHECK(e.column() == 2);
    }
  }
}

TEST_CASE("partial pivoting handles a zero leading entry") {
  Matrix a(2, 2);
  a(0, 0) = 0;
  a(0, 1) = 1;
  a(1, 0) = 1;
  a(1, 1) = 0;
  const Vector x = lu_solve(a, Vector{2, 3});
  CHECK(x[0] == 3.0);
  CHECK(x[1] == 2.0);
}

TEST_CASE("random systems meet the residual bound") {
  for (std::size_t n : {1u, 5u, 63u, 64u, 65u, 200u, 530u}) {
    CAPTURE(n);
    const Matrix a = random_matrix(n);
    const Vector b = random_vector(n);
    const Vector x = lu_solve(a, b);
    CHECK(relative_residual(a, x, b) <= 1e-10);
  }
}

TEST_CASE("serial and parallel factorisations agree") {
  for (std::size_t n : {7u, 64u, 100u, 129u, 600u}) {
    for (std::size_t block : {1u, 16u, 64u, 1000u}) {
      CAPTURE(n);
      CAPTURE(block);
      const Matrix a = random_matrix(n);
      const auto s = lu_factor_serial(a);
      const auto p = lu_factor_parallel(a, block);
      CHECK(s.pivots == p.pivots);
      double diff = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) diff = std::max(diff, std::abs(s.lu(i, j) - p.lu(i, j)));
      CHECK(diff <= 1e-12 * std::max(1.0, norm_inf(s.lu)));

      const Vector b = random_vector(n);
      CHECK(testing::max_diff(lu_substitute(s, b), lu_substitute(p, b)) <= 1e-10);
    }
  }
}

TEST_CASE("matvec kernels agree") {
  const Matrix a = random_matrix(301);
  const Vector x = random_vector(301);
  CHECK(matvec_serial(a, x) == matvec_parallel(a, x));
  CHECK_THROWS_AS(matvec_serial(a, Vector(3)), InvalidArgument);
}

TEST_CASE("matrix helpers") {
  Matrix a(2, 3);
  a(0, 2) = -4;
  a(1, 0) = 2;
  const Matrix t = transpose(a);
  CHECK(t.rows() == 3);
  CHECK(t(2, 0) == -4);
  CHECK(norm_inf(a) == 4);
  CHECK(max_abs(Vector{1, -7, 3}) == 7);
}
