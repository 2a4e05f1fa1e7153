#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using spt::cli::invoke;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = invoke(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::string drop_last_column(const std::string& csv) {
  std::string out;
  for (const auto& l : lines(csv)) out += l.substr(0, l.rfind(',')) + '\n';
  return out;
}

}  // namespace

TEST_CASE("list shows the catalog") {
  const auto r = call({"list"});
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  CHECK(ls.size() == 7);
  CHECK(ls[0].rfind("ex1  ", 0) == 0);
}

TEST_CASE("solve writes the flux profile") {
  const auto r = call({"solve", "--problem", "ex1", "--n", "10", "--m", "11"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  CHECK(ls[0] == "x,u_num,u_exact,abs_err");
  CHECK(ls.size() == 402);
  double worst = 0.0;
  for (std::size_t i = 1; i < ls.size(); ++i) worst = std::max(worst, std::stod(ls[i].substr(ls[i].rfind(',') + 1)));
  CHECK(worst <= 1e-12);

  const auto plain = call({"solve", "--problem", "ex3", "--n", "6", "--m", "3"});
  CHECK(lines(plain.out)[0] == "x,u_num");
}

TEST_CASE("solve with source iteration and dumps") {
  const auto dir = std::filesystem::temp_directory_path() / "spt_cli_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto r = call({"solve", "--problem", "ex1", "--n", "6", "--m", "3", "--solver", "source-iteration", "--tol",
                       "1e-13", "--dump-coeffs", (dir / "c.csv").string(), "--dump-system", (dir / "sys").string(),
                       "--output", (dir / "u.csv").string()});
  CHECK(r.code == 0);
  CHECK(r.err.find("iterations") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "sys" / "A.csv"));
  std::ifstream c(dir / "c.csv");
  std::string header;
  std::getline(c, header);
  CHECK(header == "m,mu,n,coeff");
  std::ifstream u(dir / "u.csv");
  std::getline(u, header);
  CHECK(header == "x,u_num,u_exact,abs_err");
  std::filesystem::remove_all(dir);
}

TEST_CASE("converge output is deterministic") {
  const std::vector<std::string> args{"converge", "--problem", "ex7", "--sweep-n", "4,8,16", "--m", "5"};
  const auto a = call(args);
  const auto b = call(args);
  REQUIRE(a.code == 0);
  CHECK(lines(a.out)[0] == "param,N,M,E,dof,flux_l2_error,boundary_error,wall_time_ms");
  CHECK(drop_last_column(a.out) == drop_last_column(b.out));

  const auto j = call({"converge", "--problem", "ex1", "--sweep-m", "1,3,5", "--format", "json"});
  CHECK(j.code == 0);
  CHECK(j.out.find("\"param\"") != std::string::npos);
}

TEST_CASE("invalid combinations exit 2 and name both flags") {
  struct Case {
    std::vector<std::string> args;
    std::string first, second;
  };
  const std::vector<Case> cases{
      {{"solve", "--sweep-n", "2,4"}, "--sweep-n", "solve"},
      {{"converge", "--sweep-n", "2,4", "--sweep-m", "1,3"}, "--sweep-n", "--sweep-m"},
      {{"converge", "--sweep-n", "2,4", "--n", "3"}, "--sweep-n", "--n"},
      {{"solve", "--tol", "1e-8"}, "--tol", "--solver direct"},
      {{"verify", "--n", "4"}, "--n", "verify"},
      {{"list", "--problem", "ex1"}, "--problem", "list"},
      {{"converge", "--sweep-m", "2,4", "--dump-coeffs", "x"}, "--dump-coeffs", "converge"},
      {{"solve", "--format", "json"}, "--format", "solve"},
      {{"fixture", "--problem", "ex3"}, "fixture", "--output"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.first);
    const auto r = call(c.args);
    CHECK(r.code == 2);
    CHECK(r.err.find("invalid combination") != std::string::npos);
    CHECK(r.err.find(c.first) != std::string::npos);
    CHECK(r.err.find(c.second) != std::string::npos);
  }
}

TEST_CASE("configuration errors exit 2") {
  for (const auto& args : std::vector<std::vector<std::string>>{{"solve", "--problem", "ex9"},
                                                                 {"bogus"},
                                                                 {"solve", "--n", "0"},
                                                                 {"solve", "--problem", "ex5", "--elements", "0.5"},
                                                                 {"converge", "--sweep-n", "4"},
                                                                 {"converge", "--sweep-n", "4,-2"},
                                                                 {"converge", "--problem", "ex3", "--sweep-n", "4,8"},
                                                                 {"converge", "--sweep-n", "4,8", "--reference", "self:x"}}) {
    CAPTURE(args[0]);
    CHECK(call(args).code == 2);
  }
}

TEST_CASE("solver failures exit 3") {
  const auto r = call({"solve", "--problem", "ex3", "--n", "8", "--m", "3", "--solver", "source-iteration",
                       "--max-iter", "5"});
  CHECK(r.code == 3);
  CHECK(r.err.find("solver failure") != std::string::npos);
}

TEST_CASE("verify reports each check") {
  const auto r = call({"verify", "--problem", "ex1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("coercivity: PASS") != std::string::npos);
  CHECK(r.out.find("exact_residual: PASS") != std::string::npos);
  const auto s = call({"verify", "--problem", "ex3"});
  CHECK(s.out.find("exact_residual: SKIP") != std::string::npos);
}

TEST_CASE("problem files are accepted") {
  const auto path = std::filesystem::temp_directory_path() / "spt_cli_problem.json";
  std::ofstream(path) << R"({"name": "flat", "domain": [0, 1], "sigma_t": "1", "sigma_s": "0.5", "source": "1",
                            "g_left": 1, "g_right": 1, "exact_solution": "1", "coercivity_c": 0.5})";
  const auto r = call({"solve", "--problem", path.string(), "--n", "2", "--m", "1"});
  CHECK(r.code == 0);
  const auto v = call({"verify", "--problem", path.string()});
  CHECK(v.code == 0);
  std::filesystem::remove(path);
}
