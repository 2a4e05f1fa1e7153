#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "spt/analysis.hpp"
#include "spt/errors.hpp"

namespace spt::cli {

namespace {

struct HelpRequested {
  std::string text;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (int x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

[[noreturn]] void reject(const std::string& a, const std::string& b, const std::string& why) {
  throw ConfigError("invalid combination " + a + " with " + b + ": " + why);
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.output.empty()) {
    out << text;
    return;
  }
  const std::filesystem::path path(config.output);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write --output " + config.output);
  file << text;
}

std::vector<double> parse_boundaries(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || *end != '\0' || !std::isfinite(v))
      throw ConfigError("--elements expects 'auto', 'none' or a comma-separated list of numbers, got '" + text + "'");
    out.push_back(v);
  }
  return out;
}

Mesh build_mesh(const ProblemSpec& spec, int n_deg, const std::string& elements) {
  if (elements == "auto") return Mesh::fitted(spec, n_deg);
  std::vector<double> bounds{spec.x_left, spec.x_right};
  if (elements != "none")
    for (double b : parse_boundaries(elements)) bounds.push_back(b);
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  if (bounds.front() < spec.x_left || bounds.back() > spec.x_right)
    throw ConfigError("--elements boundary outside the problem domain");
  return make_mesh(spec, n_deg, bounds);
}

std::vector<double> study_boundaries(const ProblemSpec& spec, const std::string& elements) {
  if (elements == "auto") return {};
  return build_mesh(spec, 1, elements).boundaries();
}

int run_list(const RunConfig& config, std::ostream& out) {
  std::ostringstream text;
  for (const auto& name : catalog_names()) text << name << "  " << catalog(name).description << '\n';
  emit(config, text.str(), out);
  return ok;
}

int run_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const ProblemSpec spec = resolve_problem(config.problem);
  const Mesh mesh = build_mesh(spec, config.n_deg, config.elements);
  const GlobalSystem system = assemble(spec, mesh, config.m_deg);
  if (!config.dump_system.empty()) dump_system_csv(system, config.dump_system);

  std::optional<Solution> sol;
  if (config.solver == "direct") {
    sol = solve_direct(system);
  } else {
    auto result = solve_source_iteration(system, config.tol, config.max_iter);
    err << "source iteration converged in " << result.iterations << " iterations (last update "
        << num(result.last_update) << ")\n";
    sol = std::move(result.solution);
  }

  std::optional<FluxReference> exact;
  if (spec.exact_flux || spec.exact_solution) exact = exact_flux_reference(spec);

  std::ostringstream text;
  text << "x,u_num" << (exact ? ",u_exact,abs_err" : "") << '\n';
  constexpr int samples = 401;
  for (int i = 0; i < samples; ++i) {
    const double x = i == samples - 1 ? spec.x_right
                                      : spec.x_left + (spec.x_right - spec.x_left) * i / (samples - 1.0);
    const double u = scalar_flux(*sol, x);
    text << num(x) << ',' << num(u);
    if (exact) {
      const double ue = exact->eval(x);
      text << ',' << num(ue) << ',' << num(std::abs(u - ue));
    }
    text << '\n';
  }
  emit(config, text.str(), out);

  if (!config.dump_coeffs.empty()) {
    std::ofstream file(config.dump_coeffs, std::ios::binary);
    if (!file) throw ConfigError("cannot write --dump-coeffs " + config.dump_coeffs);
    file << "m,mu,n,coeff\n";
    const Matrix& c = sol->coeffs();
    for (std::size_t m = 0; m < c.rows(); ++m)
      for (std::size_t n = 0; n < c.cols(); ++n)
        file << m << ',' << num(sol->rule().node(m)) << ',' << n << ',' << num(c(m, n)) << '\n';
  }
  return ok;
}

int run_converge(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const ProblemSpec spec = resolve_problem(config.problem);
  StudyConfig study;
  study.param = config.sweep_n.empty() ? SweepParam::m : SweepParam::n;
  study.values = config.sweep_n.empty() ? config.sweep_m : config.sweep_n;
  study.fixed_n = config.n_deg;
  study.fixed_m = config.m_deg;
  study.boundaries = study_boundaries(spec, config.elements);
  study.reference = ReferenceSpec::parse(config.reference);
  study.threads =
      config.threads < 0 ? std::max(1, static_cast<int>(std::thread::hardware_concurrency())) : config.threads;

  const ConvergenceTable table = convergence_study(spec, study);
  emit(config, config.format == "json" ? table.to_json() : table.to_csv(), out);

  int failed = 0;
  for (const auto& row : table.rows)
    if (row.failed) {
      ++failed;
      err << "row N=" << row.n_deg << " M=" << row.m_deg << " failed: " << row.failure << '\n';
    }
  return failed ? solver_failure : ok;
}

int run_verify(const RunConfig& config, std::ostream& out) {
  const ProblemSpec spec = resolve_problem(config.problem);
  std::ostringstream text;
  bool all = true;
  const auto report = [&](const char* name, const CheckResult& r) {
    text << name << ": " << (r.passed ? "PASS" : "FAIL") << " (" << r.detail << ")\n";
    all = all && r.passed;
  };
  report("coercivity", check_coercivity(spec));
  if (spec.exact_solution)
    report("exact_residual", check_exact_residual(spec));
  else
    text << "exact_residual: SKIP (no exact solution)\n";
  emit(config, text.str(), out);
  return all ? ok : check_failed;
}

int run_fixture(const RunConfig& config, std::ostream& err) {
  const ProblemSpec spec = resolve_problem(config.problem);
  const Mesh mesh = build_mesh(spec, config.n_deg, config.elements);
  const Solution sol = solve_direct(assemble(spec, mesh, config.m_deg));
  write_fixture(sol, config.output);
  err << "wrote " << config.output << '\n';
  return ok;
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"Spectral Galerkin / discrete-ordinates solver for 1D steady transport", "spectral_transport"};
  app.add_option("command", cfg.command, "solve | converge | list | verify | fixture")
      ->required()
      ->check(CLI::IsMember({"solve", "converge", "list", "verify", "fixture"}));
  app.add_option("--problem", cfg.problem, "catalog name (ex1..ex7) or problem JSON path");
  app.add_option("--n", cfg.n_deg, "spatial degree N per element")->check(CLI::PositiveNumber);
  app.add_option("--m", cfg.m_deg, "angular degree M (M+1 ordinates)")->check(CLI::PositiveNumber);
  app.add_option("--elements", cfg.elements, "auto | none | comma-separated element boundaries");
  app.add_option("--solver", cfg.solver, "direct | source-iteration")
      ->check(CLI::IsMember({"direct", "source-iteration"}));
  app.add_option("--tol", cfg.tol, "source-iteration tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", cfg.max_iter, "source-iteration sweep limit")->check(CLI::PositiveNumber);
  app.add_option("--sweep-n", cfg.sweep_n, "N values for converge")->delimiter(',');
  app.add_option("--sweep-m", cfg.sweep_m, "M values for converge")->delimiter(',');
  app.add_option("--reference", cfg.reference, "exact | fixture:PATH | self:N,M");
  app.add_option("-o,--output", cfg.output, "output file (default: standard output)");
  app.add_option("--format", cfg.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--dump-coeffs", cfg.dump_coeffs, "write angular coefficients as CSV");
  app.add_option("--dump-system", cfg.dump_system, "write A, f and index sets into this directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  for (const auto* opt : app.get_options())
    if (opt->count() > 0) cfg.given.insert(opt->get_name());
  cfg.threads = threads_from_env();
  return cfg;
}

void validate(const RunConfig& c) {
  const std::string cmd = "command '" + c.command + "'";
  const bool converge = c.command == "converge";

  if (c.command == "list") {
    for (const auto& flag : c.given)
      if (flag != "command" && flag != "--output") reject(flag, cmd, "list takes no options besides --output");
    return;
  }
  for (const char* flag : {"--sweep-n", "--sweep-m", "--reference"})
    if (c.has(flag) && !converge) reject(flag, cmd, "only valid with converge");
  for (const char* flag : {"--dump-coeffs", "--dump-system", "--solver"})
    if (c.has(flag) && c.command != "solve") reject(flag, cmd, "only valid with solve");
  for (const char* flag : {"--tol", "--max-iter"})
    if (c.has(flag) && c.solver != "source-iteration")
      reject(flag, "--solver " + c.solver, "only valid with --solver source-iteration");
  if (c.has("--format") && !converge) reject("--format", cmd, "only converge writes JSON");
  if (c.command == "verify")
    for (const char* flag : {"--n", "--m", "--elements"})
      if (c.has(flag)) reject(flag, cmd, "verify checks the problem data only");

  if (converge) {
    if (c.sweep_n.empty() == c.sweep_m.empty()) {
      if (c.sweep_n.empty()) throw ConfigError("converge needs --sweep-n or --sweep-m");
      reject("--sweep-n", "--sweep-m", "sweep one parameter at a time");
    }
    if (c.has("--sweep-n") && c.has("--n")) reject("--sweep-n", "--n", "N is the swept parameter");
    if (c.has("--sweep-m") && c.has("--m")) reject("--sweep-m", "--m", "M is the swept parameter");
    const auto& values = c.sweep_n.empty() ? c.sweep_m : c.sweep_n;
    if (values.size() < 2) throw ConfigError("a sweep needs at least two values, got '" + join(values) + "'");
    for (int v : values)
      if (v < 1) throw ConfigError("sweep values must be positive, got '" + join(values) + "'");
  }
  if (c.command == "fixture" && c.output.empty()) reject("fixture", "missing --output", "a fixture needs a file");
}

int threads_from_env() {
  const char* raw = std::getenv("SPECTRAL_TRANSPORT_THREADS");
  if (!raw || !*raw) return -1;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 0 || v > 4096)
    throw ConfigError(std::string("SPECTRAL_TRANSPORT_THREADS must be a non-negative integer, got '") + raw + "'");
  return static_cast<int>(v);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.command == "list") return run_list(config, out);
  if (config.command == "solve") return run_solve(config, out, err);
  if (config.command == "converge") return run_converge(config, out, err);
  if (config.command == "verify") return run_verify(config, out);
  if (config.command == "fixture") return run_fixture(config, err);
  throw ConfigError("unknown command '" + config.command + "'");
}

int invoke(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig config = parse_args(args);
    validate(config);
    return run(config, out, err);
  } catch (const HelpRequested& h) {
    out << h.text;
    return ok;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return config_error;
  } catch (const NotFound& e) {
    err << "configuration error: " << e.what() << '\n';
    return config_error;
  } catch (const ParseError& e) {
    err << "configuration error: " << e.what() << '\n';
    return config_error;
  } catch (const EvalError& e) {
    err << "configuration error: " << e.what() << '\n';
    return config_error;
  } catch (const InvalidArgument& e) {
    err << "configuration error: " << e.what() << '\n';
    return config_error;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << '\n';
    return solver_failure;
  }
}

}  // namespace spt::cli
