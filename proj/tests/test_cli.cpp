#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "helpers.hpp"

using fracbil::testing::corpus_path;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(FRACBIL_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.output.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_file(const std::string& name) { return "/tmp/fracbil_test_" + name; }

}  // namespace

TEST_CASE("check-necessary succeeds on the corpus") {
  auto r = run_cli("check-necessary " + corpus_path("q1_sec3.blp") + " --point 0,0");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("SUPPORTED") != std::string::npos);
  CHECK(r.output.find("certificate") != std::string::npos);

  // Rational mode re-run reports exact multipliers; float mode also passes.
  auto rf = run_cli("check-necessary " + corpus_path("q1_sec3.blp") + " --mode float");
  CHECK(rf.exit_code == 0);
}

TEST_CASE("missing file and missing declarations exit codes") {
  CHECK(run_cli("check-necessary " + corpus_path("no_such_file.blp")).exit_code == 2);

  std::string path = temp_file("nodecl.blp");
  std::ofstream(path) << R"(problem "nodecl"
dims x=1 y=1 objectives=1
box x[0] in [0, 1] step 0.1
box y[0] in [0, 1] step 0.1
F1 = piecewise{ true : x + 1 }
G1 = piecewise{ true : 1 }
f = piecewise{ true : y }
phi1 = piecewise{ true : y - 1 }
refpoint = (0, 0)
D = orthant(+, +)
)";
  CHECK(run_cli("check-necessary " + path).exit_code == 3);

  std::string bad = temp_file("bad.blp");
  std::ofstream(bad) << "problem \"bad\"\ndims x=1 y=1 objectives=1\nF1 = piecewise{ x >> 0 : 1 }\n";
  auto r = run_cli("oracle " + bad);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("line 3") != std::string::npos);
}

TEST_CASE("check-sufficient certifies the corpus point") {
  auto r = run_cli("check-sufficient " + corpus_path("q1_sec4.blp") +
                   " --point 0,0 --step 0.05 --samples 200");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("WEAK-PARETO-CERTIFIED") != std::string::npos);

  auto skipped = run_cli("check-sufficient " + corpus_path("q1_sec4.blp") +
                         " --step 0.05 --samples 120 --skip-oracle");
  CHECK(skipped.exit_code == 0);
  CHECK(skipped.output.find("SKIPPED") != std::string::npos);
}

TEST_CASE("corrupted certificate file fails verification") {
  std::string path = temp_file("corrupt.cert");
  std::ofstream(path) << R"(certificate "q1_sec4"
point = (0, 0)
xi = [3/2, 1/4]
tau = [2/5, 1]
rho = [7/2]
eta = 1/3
z = (0, 0)
)";
  auto r = run_cli("check-sufficient " + corpus_path("q1_sec4.blp") + " --certificate " + path +
                   " --step 0.05 --samples 120 --skip-oracle");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("NOT-CERTIFIED") != std::string::npos);
}

TEST_CASE("duality subcommand runs both directions") {
  auto r = run_cli("duality " + corpus_path("mq_sec5.blp") + " --dual " +
                   corpus_path("mq_dual.cert") + " --samples 200 --step 0.05");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("0 violation(s)") != std::string::npos);

  auto rp = run_cli("duality " + corpus_path("q1_sec4.blp") +
                    " --from-primal 0,0 --step 0.05 --samples 100");
  CHECK(rp.exit_code == 0);
  CHECK(rp.output.find("feasible") != std::string::npos);

  std::string path = temp_file("badsign.cert");
  std::ofstream(path) << R"(dualpoint "mq_sec5"
point = (-1, 0)
xi = [1/2, 3/2]
tau = [1/4, 1/2]
rho = [1]
eta = -1/6
z = (-13/4, -11/4)
)";
  auto rb = run_cli("duality " + corpus_path("mq_sec5.blp") + " --dual " + path + " --step 0.05");
  CHECK(rb.exit_code == 1);
}

TEST_CASE("oracle subcommand") {
  auto r = run_cli("oracle " + corpus_path("q1_sec4.blp") + " --point 0,0 --step 0.05");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("WEAK-PARETO") != std::string::npos);
  CHECK(r.output.find("lower-level solution set") != std::string::npos);
  CHECK(r.output.find("1") != std::string::npos);

  auto front = run_cli("oracle " + corpus_path("q1_sec3.blp") + " --step 0.1");
  CHECK(front.exit_code == 0);
  CHECK(front.output.find("(0, 0)") != std::string::npos);

  auto coarse = run_cli("oracle " + corpus_path("q1_sec3.blp") + " --step 0.5");
  CHECK(coarse.output.find("resolution-limited") != std::string::npos);
}

TEST_CASE("validate subcommand checks every declared carrier") {
  auto r = run_cli("validate " + corpus_path("mq_sec5.blp"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("carrier validation: PASS") != std::string::npos);
}

TEST_CASE("machine reports are byte-identical for a fixed command and seed") {
  std::string ra = temp_file("rep_a.txt");
  std::string rb = temp_file("rep_b.txt");
  std::string cmd = "check-sufficient " + corpus_path("q1_sec4.blp") +
                    " --step 0.05 --samples 150 --seed 42 --report ";
  REQUIRE(run_cli(cmd + ra).exit_code == 0);
  REQUIRE(run_cli(cmd + rb).exit_code == 0);
  std::string a = slurp(ra);
  REQUIRE_FALSE(a.empty());
  CHECK(a == slurp(rb));
  CHECK(a.find("report.seed = 42") != std::string::npos);
}

TEST_CASE("emitted certificates re-ingest") {
  std::string cert = temp_file("emitted.cert");
  auto r = run_cli("check-necessary " + corpus_path("q1_sec3.blp") + " --emit-cert " + cert);
  REQUIRE(r.exit_code == 0);
  auto r2 = run_cli("check-sufficient " + corpus_path("q1_sec3.blp") + " --certificate " + cert +
                    " --samples 120 --step 0.05 --skip-oracle");
  CHECK(r2.exit_code == 0);
}

TEST_CASE("jobs flag leaves oracle results unchanged") {
  auto serial = run_cli("oracle " + corpus_path("q1_sec4.blp") + " --step 0.05 --report " +
                        temp_file("jobs1.txt") + " --jobs 1");
  auto parallel = run_cli("oracle " + corpus_path("q1_sec4.blp") + " --step 0.05 --report " +
                          temp_file("jobs4.txt") + " --jobs 4");
  REQUIRE(serial.exit_code == 0);
  REQUIRE(parallel.exit_code == 0);
  CHECK(slurp(temp_file("jobs1.txt")) == slurp(temp_file("jobs4.txt")));
}
