#include "spt/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "spt/errors.hpp"
#include "spt/kernels.hpp"

namespace spt {

FluxReference exact_flux_reference(const ProblemSpec& spec) {
  if (spec.exact_flux) {
    const Coefficient u = *spec.exact_flux;
    return {[u](double x) { return u(x); }, u.breakpoints()};
  }
  if (spec.exact_solution) {
    const Coefficient phi = *spec.exact_solution;
    const auto rule = std::make_shared<const QuadratureRule>(gauss_rule(64));
    return {[phi, rule](double x) {
              return quad_integrate([&](double mu) { return phi(x, mu); }, *rule);
            },
            phi.breakpoints()};
  }
  throw ConfigError("problem '" + spec.name + "' has no exact solution; use a fixture or self reference");
}

AngularReference exact_angular_reference(const ProblemSpec& spec) {
  if (!spec.exact_solution) throw ConfigError("problem '" + spec.name + "' has no exact angular solution");
  const Coefficient phi = *spec.exact_solution;
  return {[phi](double x, double mu) { return phi(x, mu); }, phi.breakpoints()};
}

FluxReference flux_reference(const Solution& sol) {
  auto keep = std::make_shared<const Solution>(sol);
  return {[keep](double x) { return scalar_flux(*keep, x); }, sol.mesh().boundaries()};
}

AngularReference angular_reference(const Solution& sol) {
  auto keep = std::make_shared<const Solution>(sol);
  return {[keep](double x, double mu) {
            const Vector phi = eval_all_directions(*keep, x);
            std::vector<double> l(phi.size());
            lagrange_weights(keep->rule(), mu, l);
            double s = 0.0;
            for (std::size_t m = 0; m < phi.size(); ++m) s += l[m] * phi[m];
            return s;
          },
          sol.mesh().boundaries()};
}

std::size_t error_points_x(int n_deg, double quad_scale) {
  return static_cast<std::size_t>(std::lround(quad_scale * (2.0 * n_deg + 16.0)));
}

std::size_t error_points_mu(int m_deg, double quad_scale) {
  return static_cast<std::size_t>(std::lround(quad_scale * (2.0 * (m_deg + 1) + 16.0)));
}

namespace {

template <class F>
void for_each_x_point(const Solution& sol, const std::vector<double>& breakpoints, double quad_scale, F&& f) {
  const Mesh& mesh = sol.mesh();
  const std::size_t pts = error_points_x(sol.n_deg(), quad_scale);
  for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
    const auto quad = element_quadrature(mesh.element(k), breakpoints, pts);
    for (std::size_t q = 0; q < quad.x.size(); ++q) f(quad.x[q], quad.w[q]);
  }
}

}  // namespace

double flux_l2_error(const Solution& sol, const FluxReference& reference, double quad_scale) {
  double sum = 0.0;
  for_each_x_point(sol, reference.breakpoints, quad_scale, [&](double x, double w) {
    const double d = scalar_flux(sol, x) - reference.eval(x);
    sum += w * d * d;
  });
  return std::sqrt(sum);
}

double angular_l2_error(const Solution& sol, const AngularReference& reference, double quad_scale) {
  const auto mu_rule = gauss_rule(error_points_mu(sol.m_deg(), quad_scale));
  const std::size_t dirs = sol.rule().size();
  std::vector<std::vector<double>> cardinal(mu_rule.size(), std::vector<double>(dirs));
  for (std::size_t j = 0; j < mu_rule.size(); ++j) lagrange_weights(sol.rule(), mu_rule.node(j), cardinal[j]);

  double sum = 0.0;
  for_each_x_point(sol, reference.breakpoints, quad_scale, [&](double x, double w) {
    const Vector phi = eval_all_directions(sol, x);
    for (std::size_t j = 0; j < mu_rule.size(); ++j) {
      double num = 0.0;
      for (std::size_t m = 0; m < dirs; ++m) num += cardinal[j][m] * phi[m];
      const double d = num - reference.eval(x, mu_rule.node(j));
      sum += w * mu_rule.weight(j) * d * d;
    }
  });
  return std::sqrt(sum);
}

double boundary_error(const Solution& sol, const AngularReference& reference) {
  const auto& rule = sol.rule();
  double sum = 0.0;
  for (std::size_t m = 0; m < rule.size(); ++m) {
    const double mu = rule.node(m);
    if (mu == 0.0) continue;
    const double x = mu > 0.0 ? sol.mesh().right() : sol.mesh().left();
    const double d = reference.eval(x, mu) - eval_angular_flux(sol, x, m);
    sum += rule.weight(m) * std::abs(mu) * d * d;
  }
  return std::sqrt(sum);
}

double discrete_bilinear_form(const GlobalSystem& system, std::span<const double> psi) {
  if (psi.size() != system.size()) throw InvalidArgument("coefficient vector has the wrong length");
  const Vector apsi = kernels::matvec_parallel(system.matrix_a, psi);
  const std::size_t n_sp = system.spatial_dofs();
  double total = 0.0;
  for (std::size_t m = 0; m < system.directions(); ++m) {
    double s = 0.0;
    for (std::size_t i = 0; i < n_sp; ++i) s += psi[m * n_sp + i] * apsi[m * n_sp + i];
    total += system.rule.weight(m) * s;
  }
  return total;
}

double tensor_norm_sq(const Solution& sol) {
  double sum = 0.0;
  for_each_x_point(sol, {}, 1.0, [&](double x, double w) {
    const Vector phi = eval_all_directions(sol, x);
    for (std::size_t m = 0; m < phi.size(); ++m) sum += w * sol.rule().weight(m) * phi[m] * phi[m];
  });
  return sum;
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string ConvergenceTable::to_csv(bool with_time) const {
  std::ostringstream out;
  out << "param,N,M,E,dof,flux_l2_error,boundary_error" << (with_time ? ",wall_time_ms" : "") << '\n';
  for (const auto& r : rows) {
    out << r.param << ',' << r.n_deg << ',' << r.m_deg << ',' << r.elements << ',' << r.dof << ','
        << (r.failed ? "nan" : num(r.flux_l2_error)) << ','
        << (r.boundary_error && !r.failed ? num(*r.boundary_error) : "");
    if (with_time) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", r.wall_time_ms);
      out << ',' << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string ConvergenceTable::to_json(bool with_time) const {
  using nlohmann::json;
  json doc;
  doc["param"] = param == SweepParam::n ? "N" : "M";
  doc["rows"] = json::array();
  for (const auto& r : rows) {
    json row{{"param", r.param}, {"N", r.n_deg}, {"M", r.m_deg}, {"E", r.elements}, {"dof", r.dof}};
    row["flux_l2_error"] = r.failed ? json(nullptr) : json(r.flux_l2_error);
    row["boundary_error"] = r.boundary_error && !r.failed ? json(*r.boundary_error) : json(nullptr);
    if (r.angular_l2_error && !r.failed) row["angular_l2_error"] = *r.angular_l2_error;
    if (with_time) row["wall_time_ms"] = r.wall_time_ms;
    if (r.failed) row["failure"] = r.failure;
    doc["rows"].push_back(std::move(row));
  }
  doc["fitted_order"] = fitted_order ? json(*fitted_order) : json(nullptr);
  doc["spectral_flag"] = spectral_flag;
  return doc.dump(2) + "\n";
}

ReferenceSpec ReferenceSpec::parse(std::string_view text) {
  ReferenceSpec ref;
  if (text == "exact") return ref;
  if (text.starts_with("fixture:")) {
    ref.kind = Kind::fixture;
    ref.path = std::string(text.substr(8));
    if (ref.path.empty()) throw ConfigError("reference 'fixture:' needs a path");
    return ref;
  }
  if (text.starts_with("self:")) {
    ref.kind = Kind::self;
    const std::string rest(text.substr(5));
    int n = 0, m = 0;
    char tail = 0;
    if (std::sscanf(rest.c_str(), "%d,%d%c", &n, &m, &tail) != 2 || n < 1 || m < 1)
      throw ConfigError("reference 'self:N,M' needs positive integers, got '" + rest + "'");
    ref.n_ref = n;
    ref.m_ref = m;
    return ref;
  }
  throw ConfigError("unknown reference '" + std::string(text) + "' (expected exact, fixture:PATH or self:N,M)");
}

Mesh make_mesh(const ProblemSpec& spec, int n_deg, const std::vector<double>& boundaries) {
  try {
    if (boundaries.empty()) return Mesh::fitted(spec, n_deg);
    return Mesh(boundaries, n_deg);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

double fit_order(const ConvergenceTable& table) {
  std::vector<double> lx, ly;
  for (const auto& r : table.rows) {
    if (r.failed || !(r.flux_l2_error > 1e-13) || !std::isfinite(r.flux_l2_error)) continue;
    const double p = table.param == SweepParam::n ? r.n_deg : r.m_deg + 1.0;
    lx.push_back(std::log(p));
    ly.push_back(std::log(r.flux_l2_error));
  }
  if (lx.size() < 3)
    throw AnalysisError("order fitting needs at least 3 rows with error above 1e-13, got " +
                        std::to_string(lx.size()));
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw AnalysisError("order fitting needs at least two distinct sweep values");
  return sxy / sxx;
}

ConvergenceTable convergence_study(const ProblemSpec& spec, const StudyConfig& config) {
  if (config.values.size() < 2) throw ConfigError("a convergence sweep needs at least two values");
  for (int v : config.values)
    if (v < 1) throw ConfigError("sweep values must be positive, got " + std::to_string(v));

  FluxReference flux_ref;
  std::optional<AngularReference> angular_ref;
  bool exact_angular = false;
  switch (config.reference.kind) {
    case ReferenceSpec::Kind::exact:
      flux_ref = exact_flux_reference(spec);
      if (spec.exact_solution) {
        angular_ref = exact_angular_reference(spec);
        exact_angular = true;
      }
      break;
    case ReferenceSpec::Kind::fixture: {
      const Solution ref = read_fixture(config.reference.path, spec);
      flux_ref = flux_reference(ref);
      angular_ref = angular_reference(ref);
      break;
    }
    case ReferenceSpec::Kind::self: {
      const Mesh mesh = make_mesh(spec, config.reference.n_ref, config.boundaries);
      const Solution ref = solve_direct(assemble(spec, mesh, config.reference.m_ref));
      flux_ref = flux_reference(ref);
      angular_ref = angular_reference(ref);
      break;
    }
  }

  std::vector<int> values = config.values;
  std::sort(values.begin(), values.end());

  ConvergenceTable table;
  table.param = config.param;
  table.rows.resize(values.size());

  const auto run_row = [&](std::size_t i) {
    ConvergenceRow& row = table.rows[i];
    row.param = values[i];
    row.n_deg = config.param == SweepParam::n ? values[i] : config.fixed_n;
    row.m_deg = config.param == SweepParam::m ? values[i] : config.fixed_m;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Mesh mesh = make_mesh(spec, row.n_deg, config.boundaries);
      row.elements = mesh.num_elements();
      const GlobalSystem system = assemble(spec, mesh, row.m_deg);
      row.dof = system.dof();
      const Solution sol = solve_direct(system);
      row.flux_l2_error = flux_l2_error(sol, flux_ref);
      if (angular_ref) {
        row.boundary_error = boundary_error(sol, *angular_ref);
        if (exact_angular) row.angular_l2_error = angular_l2_error(sol, *angular_ref);
      }
    } catch (const std::exception& e) {
      row.failed = true;
      row.failure = e.what();
      row.flux_l2_error = std::numeric_limits<double>::quiet_NaN();
    }
    row.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };

  const auto n_rows = static_cast<std::ptrdiff_t>(values.size());
  const int threads = std::max(config.threads, 1);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
  for (std::ptrdiff_t i = 0; i < n_rows; ++i) run_row(static_cast<std::size_t>(i));

  for (const auto& r : table.rows)
    if (!r.failed && r.flux_l2_error < 1e-11) table.spectral_flag = true;
  try {
    table.fitted_order = fit_order(table);
  } catch (const AnalysisError&) {
    table.fitted_order.reset();
  }
  return table;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_fixture(const Solution& sol, const std::filesystem::path& path) {
  std::ostringstream body;
  body << "m,n,coeff\n";
  const Matrix& c = sol.coeffs();
  for (std::size_t m = 0; m < c.rows(); ++m)
    for (std::size_t n = 0; n < c.cols(); ++n) body << m << ',' << n << ',' << num(c(m, n)) << '\n';
  const std::string data = body.str();

  std::string bounds;
  for (double b : sol.mesh().boundaries()) bounds += (bounds.empty() ? "" : ",") + num(b);
  char checksum[32];
  std::snprintf(checksum, sizeof checksum, "%016llx", static_cast<unsigned long long>(fnv1a64(data)));

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write fixture " + path.string());
  out << "# spectral_transport reference solution\n"
      << "# problem: " << sol.spec().name << '\n'
      << "# n_ref: " << sol.n_deg() << '\n'
      << "# m_ref: " << sol.m_deg() << '\n'
      << "# elements: " << bounds << '\n'
      << "# quad_points_per_piece: " << default_quad_points(sol.n_deg()) << '\n'
      << "# checksum: fnv1a64:" << checksum << '\n'
      << data;
}

Solution read_fixture(const std::filesystem::path& path, const ProblemSpec& spec) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open fixture " + path.string());
  const auto bad = [&](const std::string& why) { return ConfigError("fixture " + path.string() + ": " + why); };

  std::map<std::string, std::string> header;
  std::string line;
  std::string data;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      auto key = line.substr(1, colon - 1);
      auto value = line.substr(colon + 1);
      key.erase(0, key.find_first_not_of(' '));
      value.erase(0, value.find_first_not_of(' '));
      header[key] = value;
      continue;
    }
    data += line;
    data += '\n';
  }
  for (const char* key : {"problem", "n_ref", "m_ref", "elements", "checksum"})
    if (!header.count(key)) throw bad(std::string("missing header field '") + key + "'");
  if (header["problem"] != spec.name)
    throw bad("written for problem '" + header["problem"] + "', not '" + spec.name + "'");

  char checksum[48];
  std::snprintf(checksum, sizeof checksum, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(data)));
  if (header["checksum"] != checksum) throw bad("checksum mismatch");

  const int n_ref = std::atoi(header["n_ref"].c_str());
  const int m_ref = std::atoi(header["m_ref"].c_str());
  if (n_ref < 1 || m_ref < 1) throw bad("invalid n_ref/m_ref");
  std::vector<double> bounds;
  {
    std::istringstream ss(header["elements"]);
    std::string tok;
    while (std::getline(ss, tok, ',')) bounds.push_back(std::strtod(tok.c_str(), nullptr));
  }
  Mesh mesh = make_mesh(spec, n_ref, bounds);
  Matrix coeffs(static_cast<std::size_t>(m_ref) + 1, mesh.spatial_dofs(), std::numeric_limits<double>::quiet_NaN());

  std::istringstream rows(data);
  std::getline(rows, line);
  if (line != "m,n,coeff") throw bad("expected column header 'm,n,coeff'");
  std::size_t count = 0;
  while (std::getline(rows, line)) {
    if (line.empty()) continue;
    unsigned long m = 0, n = 0;
    char* end = nullptr;
    m = std::strtoul(line.c_str(), &end, 10);
    if (*end != ',') throw bad("malformed row '" + line + "'");
    n = std::strtoul(end + 1, &end, 10);
    if (*end != ',') throw bad("malformed row '" + line + "'");
    const double v = std::strtod(end + 1, nullptr);
    if (m >= coeffs.rows() || n >= coeffs.cols()) throw bad("row index out of range in '" + line + "'");
    coeffs(m, n) = v;
    ++count;
  }
  if (count != coeffs.rows() * coeffs.cols()) throw bad("incomplete coefficient table");
  return Solution(std::move(coeffs), std::move(mesh), gauss_rule(static_cast<std::size_t>(m_ref) + 1),
                  std::make_shared<const ProblemSpec>(spec));
}

}  // namespace spt
