#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

// Exercises the installed command-line binary end to end (path injected by
// the build system).

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  const std::string out_path = "/tmp/pdmg_cli_test.out";
  const std::string err_path = "/tmp/pdmg_cli_test.err";
  const std::string cmd =
      std::string(PDMG_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> rows;
  std::stringstream ss(csv);
  std::string line;
  bool seen_header = false;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      seen_header = true;  // header row
      continue;
    }
    rows.push_back(line);
  }
  return rows;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("usage errors exit with code 1") {
  CHECK(run_cli("").exit_code == 1);                       // missing subcommand
  CHECK(run_cli("frobnicate").exit_code == 1);             // unknown subcommand
  CHECK(run_cli("solve").exit_code == 1);                  // missing --h
  CHECK(run_cli("solve --h nonsense").exit_code == 1);     // malformed fraction
  CHECK(run_cli("solve --h 1/16 --smoother sor").exit_code == 1);
  CHECK(run_cli("sweep --h 1/16").exit_code == 1);         // missing --example
  CHECK(run_cli("solve --h 1/16 --scheme heat-bvm --lambda-re 1").exit_code == 1);
  CHECK(run_cli("solve --h 1/16 --scheme heat-bvm --shift-index 99").exit_code == 1);
}

TEST_CASE("help and version exit cleanly") {
  const RunResult help = run_cli("--help");
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("solve") != std::string::npos);
  const RunResult ver = run_cli("--version");
  CHECK(ver.exit_code == 0);
  CHECK(ver.out.find("pdmg") != std::string::npos);
}

TEST_CASE("solve: residual history CSV with manifest preamble") {
  const RunResult r = run_cli("solve --h 1/16 --lambda-re 2 --lambda-im 3");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("# pdmg solve v") != std::string::npos);
  CHECK(r.out.find("# manifest-hash: ") != std::string::npos);
  CHECK(r.out.find("iter,residual") != std::string::npos);
  const std::vector<std::string> rows = data_rows(r.out);
  CHECK(rows.size() >= 2);  // initial residual plus at least one iterate
  CHECK(rows.front().rfind("0,", 0) == 0);
  CHECK(r.err.find("converged=true") != std::string::npos);

  SUBCASE("stdout is deterministic across runs") {
    const RunResult again = run_cli("solve --h 1/16 --lambda-re 2 --lambda-im 3");
    CHECK(again.out == r.out);
  }
}

TEST_CASE("solve: scheme-derived shift and manufactured right-hand side") {
  const RunResult r = run_cli(
      "solve --h 1/16 --scheme heat-bvm --tau 1/16 --shift-index 1 --rhs manufactured");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("lambda_im") != std::string::npos);  // manifest lists the resolved shift
  CHECK(r.err.find("converged=true") != std::string::npos);
}

TEST_CASE("solve: file output lands on disk") {
  const std::string path = "/tmp/pdmg_cli_test_file.csv";
  const RunResult r = run_cli("solve --h 1/16 --out " + path);
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  const std::string csv = slurp(path);
  CHECK(csv.find("iter,residual") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("solve: singular coarse shift exits with the numerical-failure code") {
  // -lambda at the smallest eigenvalue of the 1/8 operator: two pi^2-ish.
  // Computed here with the same formula used by the library oracle.
  const double h = 0.125;
  const double mu = (4.0 - 4.0 * std::cos(3.14159265358979323846 * h)) / (h * h);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", -mu);
  const RunResult r = run_cli(std::string("solve --h 1/8 --lambda-re ") + buf);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("singular") != std::string::npos);
}

TEST_CASE("sweep: one row per shift and smoother") {
  const RunResult r = run_cli("sweep --example heat --h 1/16 --tau 1/16");
  REQUIRE(r.exit_code == 0);
  const std::vector<std::string> rows = data_rows(r.out);
  CHECK(rows.size() == 32);  // 16 eigenvalue shifts x 2 smoothers
  // All runs on this easy problem converge.
  for (const std::string& row : rows) CHECK(row.find(",true,") != std::string::npos);
}

TEST_CASE("sweep: helmholtz family needs no tau") {
  const RunResult r = run_cli("sweep --example helmholtz --h 1/16 --smoothers vanka");
  REQUIRE(r.exit_code == 0);
  CHECK(data_rows(r.out).size() == 8);  // j = 1..8 at h = 1/16
}

TEST_CASE("lfa-table: two smoother rows with optimized damping") {
  const RunResult r = run_cli("lfa-table --h 1/32 --tau 1/32 --samples 16 --nu-max 2");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("smoother,omega_opt,mu,rho_nu1,rho_nu2") != std::string::npos);
  const std::vector<std::string> rows = data_rows(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].rfind("vanka,", 0) == 0);
  CHECK(rows[1].rfind("jacobi,", 0) == 0);
}

TEST_CASE("paradiag: runs the manufactured space-time problem") {
  const RunResult r = run_cli("paradiag --h 1/16 --tau 1/16");
  REQUIRE(r.exit_code == 0);
  const std::vector<std::string> rows = data_rows(r.out);
  CHECK(rows.size() == 16);
  CHECK(r.err.find("all_converged=true") != std::string::npos);
  CHECK(r.err.find("relative_residual=") != std::string::npos);
}

TEST_CASE("paradiag: non-convergence surfaces as exit code 2") {
  // One cycle with a weak smoother cannot reach 1e-8.
  const RunResult r = run_cli("paradiag --h 1/16 --tau 1/16 --smoother jacobi --max-iter 1");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("did not converge") != std::string::npos);
}

TEST_SUITE_END();
