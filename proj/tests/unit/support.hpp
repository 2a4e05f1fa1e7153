#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Legendre polynomial from the explicit sum
//   L_n(x) = 2^-n sum_k C(n,k)^2 (x-1)^(n-k) (x+1)^k,
// independent of the three-term recurrence used by the library.
inline double legendre_explicit(int n, double x) {
  double sum = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= n; ++k) {
    sum += binom * binom * std::pow(x - 1.0, n - k) * std::pow(x + 1.0, k);
    binom = binom * (n - k) / (k + 1);
  }
  return sum / std::pow(2.0, n);
}

// Sum of the absolute terms above; bounds the rounding error of the explicit sum.
inline double legendre_explicit_scale(int n, double x) {
  double sum = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= n; ++k) {
    sum += binom * binom * std::pow(std::abs(x - 1.0), n - k) * std::pow(std::abs(x + 1.0), k);
    binom = binom * (n - k) / (k + 1);
  }
  return sum / std::pow(2.0, n);
}

// Adaptive Simpson on [a, b].
template <class F>
double simpson(F&& f, double a, double b, double tol = 1e-13, int depth = 40) {
  const auto step = [&](auto&& self, double lo, double hi, double flo, double fmid, double fhi, double whole,
                        double eps, int d) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    const double flm = f(lm), frm = f(rm);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) return left + right + (left + right - whole) / 15.0;
    return self(self, lo, mid, flo, flm, fmid, left, 0.5 * eps, d - 1) +
           self(self, mid, hi, fmid, frm, fhi, right, 0.5 * eps, d - 1);
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return step(step, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, depth);
}

}  // namespace testing
