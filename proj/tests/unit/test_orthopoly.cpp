#include <doctest.h>

#include <cmath>
#include <vector>

#include "spt/errors.hpp"
#include "spt/orthopoly.hpp"
#include "support.hpp"

using namespace spt;

TEST_CASE("legendre_eval matches hand values and the explicit sum") {
  CHECK(legendre_eval(0, 0.37) == 1.0);
  for (int n = 0; n <= 30; ++n) CHECK(legendre_eval(n, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(legendre_eval(2, 0.5) == doctest::Approx(-0.125).epsilon(1e-15));

  for (int n = 0; n <= 20; ++n)
    for (double x : {-1.0, -0.73, -0.2, 0.0, 0.41, 0.9, 1.0})
      CHECK(std::abs(legendre_eval(n, x) - testing::legendre_explicit(n, x)) <=
            1e-15 + 8 * n * 1.1e-16 * testing::legendre_explicit_scale(n, x));
}

TEST_CASE("legendre values stay in [-1, 1]") {
  for (int n = 0; n <= 60; ++n)
    for (int i = 0; i <= 200; ++i) {
      const double x = -1.0 + i / 100.0;
      CHECK(std::abs(legendre_eval(n, x)) <= 1.0 + 1e-14);
    }
}

TEST_CASE("legendre_deriv") {
  for (double x : {-0.8, 0.0, 0.3}) {
    CHECK(legendre_deriv(1, x) == 1.0);
    CHECK(legendre_deriv(0, x) == 0.0);
  }
  CHECK(std::abs(legendre_deriv(4, 0.2) - legendre_deriv(2, 0.2) - 7.0 * legendre_eval(3, 0.2)) <= 1e-12);

  SUBCASE("telescoping relation") {
    for (int n = 1; n <= 25; ++n)
      for (double x : {-1.0, -0.5, 0.11, 0.77, 1.0}) {
        const double lhs = legendre_deriv(n + 1, x) - legendre_deriv(n - 1, x);
        CHECK(std::abs(lhs - (2 * n + 1) * legendre_eval(n, x)) <= 1e-11 * (1 + std::abs(lhs)));
      }
  }
  SUBCASE("central differences") {
    const double h = 1e-6;
    for (int n = 2; n <= 12; ++n)
      for (double x : {-0.6, 0.25, 0.8}) {
        const double fd = (testing::legendre_explicit(n, x + h) - testing::legendre_explicit(n, x - h)) / (2 * h);
        CHECK(std::abs(legendre_deriv(n, x) - fd) <= 1e-6 * (1 + std::abs(fd)));
      }
  }
  SUBCASE("endpoint values n(n+1)/2") {
    for (int n = 0; n <= 30; ++n) CHECK(legendre_deriv(n, 1.0) == doctest::Approx(n * (n + 1) / 2.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(legendre_eval(-1, 0.0), InvalidArgument);
}

TEST_CASE("legendre_pair and legendre_table agree with single evaluations") {
  std::vector<double> table(15);
  legendre_table(0.42, table);
  for (int n = 0; n < 15; ++n) {
    const auto p = legendre_pair(n, 0.42);
    CHECK(p.value == table[n]);
    CHECK(p.value == legendre_eval(n, 0.42));
    CHECK(p.deriv == legendre_deriv(n, 0.42));
  }
}

TEST_CASE("gauss_rule small cases") {
  CHECK_THROWS_AS(gauss_rule(0), InvalidArgument);

  const auto r1 = gauss_rule(1);
  REQUIRE(r1.size() == 1);
  CHECK(r1.node(0) == 0.0);
  CHECK(r1.weight(0) == doctest::Approx(2.0).epsilon(1e-15));

  const auto r2 = gauss_rule(2);
  CHECK(r2.node(0) == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r2.node(1) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r2.weight(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r2.weight(1) == doctest::Approx(1.0).epsilon(1e-15));

  const auto r3 = gauss_rule(3);
  CHECK(r3.node(0) == doctest::Approx(-std::sqrt(0.6)).epsilon(1e-15));
  CHECK(r3.node(1) == 0.0);
  CHECK(r3.node(2) == doctest::Approx(std::sqrt(0.6)).epsilon(1e-15));
  CHECK(r3.weight(0) == doctest::Approx(5.0 / 9.0).epsilon(1e-15));
  CHECK(r3.weight(1) == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  CHECK(r3.weight(2) == doctest::Approx(5.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("gauss_rule invariants up to 40 points") {
  for (std::size_t n = 1; n <= 40; ++n) {
    CAPTURE(n);
    const auto r = gauss_rule(n);
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(r.node(i) > -1.0);
      CHECK(r.node(i) < 1.0);
      if (i > 0) CHECK(r.node(i) > r.node(i - 1));
      CHECK(r.weight(i) > 0.0);
      CHECK(r.node(i) == -r.node(n - 1 - i));
      CHECK(r.weight(i) == r.weight(n - 1 - i));
      // A node off by one ulp moves L_n by about |L_n'| ulp.
      CHECK(std::abs(legendre_eval(static_cast<int>(n), r.node(i))) <=
            1e-15 + 4e-16 * std::abs(legendre_deriv(static_cast<int>(n), r.node(i))));
      wsum += r.weight(i);
    }
    CHECK(std::abs(wsum - 2.0) <= 1e-13);
  }
}

TEST_CASE("gauss_rule is robust for large n") {
  for (std::size_t n : {100u, 250u, 416u}) {
    const auto r = gauss_rule(n);
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) wsum += r.weight(i);
    CHECK(std::abs(wsum - 2.0) <= 1e-12);
    CHECK(std::abs(quad_integrate([](double x) { return x * x; }, r) - 2.0 / 3.0) <= 1e-13);
  }
}

TEST_CASE("quad_integrate examples") {
  for (std::size_t n : {1u, 4u, 9u}) CHECK(quad_integrate([](double) { return 1.0; }, gauss_rule(n)) == doctest::Approx(2.0));
  CHECK(quad_integrate([](double x) { return x * x; }, gauss_rule(2)) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(std::abs(quad_integrate([](double x) { return std::pow(x, 5) - std::pow(x, 3); }, gauss_rule(3))) <= 1e-14);
}

TEST_CASE("degree 2n-1 exactness for random polynomials") {
  for (std::size_t n = 1; n <= 40; ++n) {
    const auto r = gauss_rule(n);
    for (int trial = 0; trial < 5; ++trial) {
      const std::size_t deg = 2 * n - 1;
      std::vector<double> c(deg + 1);
      for (auto& v : c) v = testing::uniform(-1.0, 1.0);
      double exact = 0.0;
      for (std::size_t k = 0; k <= deg; k += 2) exact += 2.0 * c[k] / (k + 1.0);
      const double approx = quad_integrate(
          [&](double x) {
            double s = 0.0;
            for (std::size_t k = deg + 1; k-- > 0;) s = s * x + c[k];
            return s;
          },
          r);
      CAPTURE(n);
      CHECK(std::abs(approx - exact) <= 1e-12 * (1.0 + std::abs(exact)));
    }
  }
}

TEST_CASE("Legendre orthogonality with gamma_n = 2/(2n+1)") {
  const auto r = gauss_rule(22);
  for (int n = 0; n <= 20; ++n)
    for (int m = 0; m <= 20; ++m) {
      const double v = quad_integrate([&](double x) { return legendre_eval(n, x) * legendre_eval(m, x); }, r);
      const double expect = n == m ? 2.0 / (2 * n + 1) : 0.0;
      CHECK(std::abs(v - expect) <= 1e-12);
    }
}

TEST_CASE("barycentric interpolation") {
  const auto r = gauss_rule(7);
  std::vector<double> consts(7, 3.25);
  CHECK(interpolate_at_nodes(consts, r, 0.123) == doctest::Approx(3.25).epsilon(1e-14));

  std::vector<double> lin(r.nodes().begin(), r.nodes().end());
  CHECK(interpolate_at_nodes(lin, r, 0.3) == doctest::Approx(0.3).epsilon(1e-14));

  std::vector<double> mono(7);
  for (std::size_t i = 0; i < 7; ++i) mono[i] = std::pow(r.node(i), 6);
  CHECK(std::abs(interpolate_at_nodes(mono, r, 0.77) - std::pow(0.77, 6)) <= 1e-12);

  SUBCASE("node hit returns the sample exactly") {
    std::vector<double> vals(7);
    for (auto& v : vals) v = testing::uniform(-2, 2);
    for (std::size_t i = 0; i < 7; ++i) CHECK(interpolate_at_nodes(vals, r, r.node(i)) == vals[i]);
  }
  SUBCASE("lagrange weights form a partition of unity") {
    std::vector<double> l(7);
    lagrange_weights(r, -0.41, l);
    double s = 0.0;
    for (double v : l) s += v;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    lagrange_weights(r, r.node(3), l);
    for (std::size_t i = 0; i < 7; ++i) CHECK(l[i] == (i == 3 ? 1.0 : 0.0));
  }
}

TEST_CASE("interpolation error decays for a smooth function") {
  const auto u = [](double mu) { return 1.0 / (2.0 - mu); };
  double prev = INFINITY;
  for (int m : {4, 8, 16, 32}) {
    const auto r = gauss_rule(static_cast<std::size_t>(m) + 1);
    std::vector<double> vals(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) vals[i] = u(r.node(i));
    double err = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double x = -1.0 + 2.0 * i / 199.0;
      err = std::max(err, std::abs(u(x) - interpolate_at_nodes(vals, r, x)));
    }
    CAPTURE(m);
    CHECK(err <= 2.0 * prev);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev <= 1e-12);
}
