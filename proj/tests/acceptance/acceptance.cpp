// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spt/analysis.hpp"
#include "spt/assembly.hpp"
#include "spt/orthopoly.hpp"
#include "spt/problem.hpp"
#include "spt/solve.hpp"

using namespace spt;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const std::filesystem::path kFixtures = SPT_FIXTURE_DIR;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Solution direct(const ProblemSpec& spec, const Mesh& mesh, int m) { return solve_direct(assemble(spec, mesh, m)); }

Verdict exactness(const char* name, int n, int m, std::size_t elements, double tol, double limit_s) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto spec = catalog(name);
  const Mesh mesh = Mesh::fitted(spec, n);
  const double err = flux_l2_error(direct(spec, mesh, m), exact_flux_reference(spec));
  const double t = seconds_since(t0);
  const bool ok = err <= tol && t < limit_s && mesh.num_elements() == elements;
  return {ok, "E=" + std::to_string(mesh.num_elements()) + " error " + fmt(err) + " (tol " + fmt(tol) + "), " +
                  fmt(t) + " s (limit " + fmt(limit_s) + " s)"};
}

Verdict c1() { return exactness("ex1", 6, 1, 1, 1e-12, 1.0); }
Verdict c2() { return exactness("ex2", 25, 2, 1, 1e-9, 2.0); }
Verdict c3() { return exactness("ex5", 6, 1, 2, 1e-10, 1.0); }

std::string errors_of(const ConvergenceTable& t) {
  std::string s;
  for (const auto& r : t.rows) s += (s.empty() ? "" : ", ") + fmt(r.flux_l2_error);
  return s;
}

Verdict c4() {
  const auto t0 = std::chrono::steady_clock::now();
  StudyConfig cfg;
  cfg.values = {16, 32, 64, 128};
  cfg.fixed_m = 29;
  const auto table = convergence_study(catalog("ex7"), cfg);
  const double t = seconds_since(t0);
  if (!table.fitted_order) return {false, "no fitted order; errors " + errors_of(table)};
  const double p = *table.fitted_order;
  const bool ok = p >= -1.2 && p <= -0.8 && t < 60.0;
  return {ok, "fitted order " + fmt(p) + " (want [-1.2, -0.8]), errors " + errors_of(table) + ", " + fmt(t) + " s"};
}

Verdict c5() {
  const auto t0 = std::chrono::steady_clock::now();
  StudyConfig cfg;
  cfg.values = {20, 40, 80, 160};
  cfg.fixed_m = 11;
  cfg.reference.kind = ReferenceSpec::Kind::fixture;
  cfg.reference.path = kFixtures / "ex3_ref.csv";
  const auto table = convergence_study(catalog("ex3"), cfg);
  const double t = seconds_since(t0);
  bool ok = t < 120.0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    ok = ok && !table.rows[i].failed;
    if (i > 0) ok = ok && table.rows[i].flux_l2_error < table.rows[i - 1].flux_l2_error;
  }
  ok = ok && table.rows.back().flux_l2_error <= 1e-6;
  return {ok, "errors " + errors_of(table) + ", " + fmt(t) + " s"};
}

Verdict c6() {
  const auto spec = catalog("ex1");
  const double c = *spec.coercivity_c;
  std::mt19937_64 gen(4242);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double worst = INFINITY;
  for (auto [n, m] : {std::pair{8, 7}, std::pair{16, 11}}) {
    const auto sys = assemble(spec, Mesh::single(spec.x_left, spec.x_right, n), m);
    for (int trial = 0; trial < 25; ++trial) {
      Vector psi(sys.size(), 0.0);
      for (std::size_t g : sys.idx_io) psi[g] = dist(gen);
      const double margin = discrete_bilinear_form(sys, psi) - 0.5 * c * tensor_norm_sq(make_solution(sys, psi));
      worst = std::min(worst, margin);
    }
  }
  return {worst >= -1e-10, "smallest margin " + fmt(worst) + " over 50 samples"};
}

Verdict c7() {
  double worst_exact = 0.0;
  for (std::size_t n = 1; n <= 40; ++n) {
    const auto rule = gauss_rule(n);
    for (std::size_t k = 0; k <= 2 * n - 1; ++k) {
      const double got = quad_integrate([&](double x) { return std::pow(x, static_cast<double>(k)); }, rule);
      const double want = k % 2 ? 0.0 : 2.0 / static_cast<double>(k + 1);
      worst_exact = std::max(worst_exact, std::abs(got - want));
    }
  }
  double worst_orth = 0.0;
  const auto rule = gauss_rule(30);
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      const double got = quad_integrate([&](double x) { return legendre_eval(i, x) * legendre_eval(j, x); }, rule);
      const double want = i == j ? 2.0 / (2 * i + 1) : 0.0;
      worst_orth = std::max(worst_orth, std::abs(got - want));
    }
  return {worst_exact <= 1e-12 && worst_orth <= 1e-12,
          "exactness defect " + fmt(worst_exact) + ", orthogonality defect " + fmt(worst_orth)};
}

Verdict c8() {
  const auto mask = mask_indices(5, 3, Mesh::single(0.0, 1.0, 5));
  const std::vector<std::size_t> want{5, 11, 12, 18};
  std::string got;
  for (auto i : mask.bc) got += (got.empty() ? "" : ",") + std::to_string(i);
  return {mask.bc == want && mask.io.size() == 20, "idx_bc = [" + got + "]"};
}

Verdict c9() {
  double worst = 0.0;
  for (const char* name : {"ex1", "ex5"}) {
    const auto spec = catalog(name);
    const auto sys = assemble(spec, Mesh::fitted(spec, 10), 3);
    const Vector a = flatten(solve_direct(sys));
    const Vector b = flatten(solve_source_iteration(sys, 1e-13, 1000).solution);
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return {worst <= 1e-10, "max difference " + fmt(worst)};
}

Verdict c10() {
  bool ok = true;
  std::string detail;
  double lowest = INFINITY;
  for (const char* name : {"ex4", "ex6"}) {
    const auto spec = catalog(name);
    std::vector<std::vector<double>> samples;
    for (int n : {20, 40, 80, 160}) {
      const Solution sol = direct(spec, Mesh::fitted(spec, n), 11);
      std::vector<double> u;
      for (int i = 0; i <= 400; ++i) {
        const double x = spec.x_left + (spec.x_right - spec.x_left) * i / 400.0;
        u.push_back(scalar_flux(sol, x));
        if (std::string(name) == "ex4") lowest = std::min(lowest, u.back());
      }
      samples.push_back(std::move(u));
    }
    std::vector<double> changes;
    for (std::size_t k = 1; k < samples.size(); ++k) {
      double c = 0.0;
      for (std::size_t i = 0; i < samples[k].size(); ++i) c = std::max(c, std::abs(samples[k][i] - samples[k - 1][i]));
      changes.push_back(c);
    }
    for (std::size_t k = 1; k < changes.size(); ++k) ok = ok && changes[k] < changes[k - 1];
    detail += std::string(name) + " changes " + fmt(changes[0]) + ", " + fmt(changes[1]) + ", " + fmt(changes[2]) + "; ";
  }
  ok = ok && lowest >= -1e-8;
  return {ok, detail + "ex4 minimum flux " + fmt(lowest)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"ex1 exactness", c1},         {"ex2 exactness", c2},           {"ex5 two-element exactness", c3},
      {"ex7 convergence order", c4}, {"ex3 self-convergence", c5},    {"coercivity", c6},
      {"quadrature and orthogonality", c7}, {"mask indices", c8}, {"source iteration equals direct", c9},
      {"ex4/ex6 self-convergence", c10}};
  int only = 0;
  if (argc == 3 && std::string(argv[1]) == "--only") only = std::atoi(argv[2]);

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only != 0 && static_cast<int>(k) + 1 != only) continue;
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %zu %s: %s (%s)\n", k + 1, criteria[k].first, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
