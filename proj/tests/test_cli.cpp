// End-to-end checks of the command-line front end: exit codes, CSV shape,
// config handling and byte-for-byte determinism. Talks to the binary only
// through std::system.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string cli() { return LIESYS_CLI_PATH; }

int run(const std::string& args, const std::string& out_path = "/dev/null",
        const std::string& err_path = "/dev/null") {
  std::string cmd = cli() + " " + args + " >" + out_path + " 2>" + err_path;
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::string tmp(const char* name) {
  return std::string("/tmp/liesys_cli_") + name;
}

}  // namespace

TEST_CASE("help exits cleanly and lists the commands") {
  std::string out = tmp("help.txt");
  CHECK(run("help", out) == 0);
  std::string text = slurp(out);
  CHECK(text.find("solve riccati") != std::string::npos);
  CHECK(text.find("check-integrability") != std::string::npos);
  CHECK(run("--help") == 0);
}

TEST_CASE("missing or malformed arguments exit with code 1") {
  std::string err = tmp("usage_err.txt");
  CHECK(run("", "/dev/null", err) == 1);
  CHECK(run("solve riccati --b0 1 --b1 0 --b2 1 --x0 0 --t0 0 --t1 1 "
            "--samples 11 --frobnicate 3",
            "/dev/null", err) == 1);
  CHECK(slurp(err).find("usage error") != std::string::npos);
  CHECK(run("solve", "/dev/null", err) == 1);
  CHECK(run("frobnicate", "/dev/null", err) == 1);
}

TEST_CASE("tangent solve emits the expected CSV") {
  std::string out = tmp("tan.csv");
  CHECK(run("solve riccati --b0 1 --b1 0 --b2 1 --x0 0 --t0 0 --t1 1 "
            "--samples 11",
            out) == 0);
  auto rows = lines(slurp(out));
  REQUIRE(rows.size() == 12);
  CHECK(rows[0] == "t,x");
  CHECK(rows[1].rfind("0,", 0) == 0);
  // Row 6 is t = 0.5.
  CHECK(rows[6].rfind("0.5,", 0) == 0);
  double x = std::strtod(rows[6].c_str() + 4, nullptr);
  CHECK(x == doctest::Approx(std::tan(0.5)).epsilon(1e-6));
}

TEST_CASE("projective infinity uses the token inf") {
  std::string out = tmp("inf.csv");
  CHECK(run("solve riccati --b0 1 --b1 0 --b2 1 --x0 inf --t0 0 --t1 1 "
            "--samples 5",
            out) == 0);
  auto rows = lines(slurp(out));
  REQUIRE(rows.size() == 6);
  CHECK(rows[1] == "0,inf");
  // -cot(t) from then on.
  double x = std::strtod(rows[5].c_str() + 2, nullptr);
  CHECK(x == doctest::Approx(-1.0 / std::tan(1.0)).epsilon(1e-6));
}

TEST_CASE("repeated runs are byte-identical") {
  std::string a = tmp("det_a.csv"), b = tmp("det_b.csv");
  std::string args =
      "solve riccati --b0 'cos(t)' --b1 't/8' --b2 '1+t^2/8' --x0 0.1 --t0 0 "
      "--t1 2 --samples 41";
  CHECK(run(args, a) == 0);
  CHECK(run(args, b) == 0);
  std::string ca = slurp(a);
  CHECK(!ca.empty());
  CHECK(ca == slurp(b));

  std::string c = tmp("det_c.csv"), d = tmp("det_d.csv");
  std::string fixed = args + " --method rk4 --step 0.01";
  CHECK(run(fixed, c) == 0);
  CHECK(run(fixed, d) == 0);
  CHECK(slurp(c) == slurp(d));
}

TEST_CASE("config files mirror flags and flags win") {
  std::string conf = tmp("solve.conf");
  {
    std::ofstream f(conf);
    f << "# tangent scenario\n"
      << "b0 = 1\n"
      << "b1 = 0\n"
      << "b2 = 1\n"
      << "x0 = 0\n"
      << "t0 = 0\n"
      << "t1 = 1\n"
      << "samples = 11\n";
  }
  std::string from_flags = tmp("flags.csv"), from_conf = tmp("conf.csv");
  CHECK(run("solve riccati --b0 1 --b1 0 --b2 1 --x0 0 --t0 0 --t1 1 "
            "--samples 11",
            from_flags) == 0);
  CHECK(run("solve riccati --config " + conf, from_conf) == 0);
  CHECK(slurp(from_flags) == slurp(from_conf));

  std::string overridden = tmp("override.csv");
  CHECK(run("solve riccati --config " + conf + " --x0 0.5", overridden) == 0);
  auto rows = lines(slurp(overridden));
  REQUIRE(rows.size() >= 2);
  CHECK(rows[1] == "0,0.5");
}

TEST_CASE("config rejections carry the file location") {
  std::string conf = tmp("bad.conf");
  {
    std::ofstream f(conf);
    f << "b0 = 1\n"
      << "flux_capacitance = 88\n";
  }
  std::string err = tmp("bad_conf_err.txt");
  CHECK(run("solve riccati --config " + conf, "/dev/null", err) == 1);
  std::string text = slurp(err);
  CHECK(text.find(":2") != std::string::npos);
  CHECK(text.find("flux_capacitance") != std::string::npos);

  std::string missing_err = tmp("missing_conf_err.txt");
  CHECK(run("solve riccati --config /nonexistent/liesys.conf", "/dev/null",
            missing_err) == 1);
  CHECK(slurp(missing_err).find("cannot open") != std::string::npos);
}

TEST_CASE("library failures exit with code 2 and the reason on stderr") {
  std::string err = tmp("domain_err.txt");
  CHECK(run("solve riccati --b0 'log(t-1)' --b1 0 --b2 1 --x0 0 --t0 0 --t1 1 "
            "--samples 11",
            "/dev/null", err) == 2);
  CHECK(slurp(err).find("domain error") != std::string::npos);

  // Coincident inputs are a library-level rejection as well.
  std::string err2 = tmp("coincident_err.txt");
  CHECK(run("superpose riccati --b0 1 --b1 0 --b2 1 --x1 0 --x2 0 --x3 1 "
            "--k 2 --t0 0 --t1 0.5 --samples 6",
            "/dev/null", err2) == 2);
  CHECK(slurp(err2).find("coincident") != std::string::npos);
}

TEST_CASE("pinney invariants print exactly") {
  std::string out = tmp("inv.txt");
  CHECK(run("invariant pinney --c 1 --state 1,2,0,0,0,1", out) == 0);
  auto rows = lines(slurp(out));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "I1: 0.125");
  CHECK(rows[1] == "I2: 2");
  CHECK(rows[2] == "W: 1");
}

TEST_CASE("generalized invariant through the front end") {
  std::string out = tmp("gen_inv.txt");
  CHECK(run("invariant ermakov --f '1+t^2' --g t --state 1,1.2,0.1,-0.1", out) ==
        0);
  auto rows = lines(slurp(out));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].rfind("F: 0.345933333", 0) == 0);
}

TEST_CASE("algebra verification reports a small residual") {
  std::string out = tmp("verify.txt");
  CHECK(run("verify-algebra --system riccati --points 20", out) == 0);
  auto rows = lines(slurp(out));
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].rfind("max residual: ", 0) == 0);
  double res = std::strtod(rows[0].c_str() + 14, nullptr);
  CHECK(res < 1e-6);
}

TEST_CASE("integrability report") {
  std::string out = tmp("criterion.txt");
  CHECK(run("check-integrability --b0 '2*(1+t^2)' --b1 '3*(1+t^2)' "
            "--b2 '(1+t^2)/2' --c0 1 --c2 1 --t0 0 --t1 1 --samples 21",
            out) == 0);
  std::string text = slurp(out);
  CHECK(text.find("holds: yes") != std::string::npos);
  CHECK(text.find("K: 3\n") != std::string::npos);
  CHECK(text.find("D: sqrt") != std::string::npos);
  CHECK(text.find("scale: sqrt") != std::string::npos);

  std::string out2 = tmp("criterion_no.txt");
  CHECK(run("check-integrability --b0 1 --b1 t --b2 1 --c0 1 --c2 1 "
            "--t0 0 --t1 1 --samples 21",
            out2) == 0);
  CHECK(slurp(out2).find("holds: no") != std::string::npos);
}
