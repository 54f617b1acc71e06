#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

struct Result {
  int code = -1;
  std::string out;
};

const std::string kDir = VEFLUID_TMP;

Result run(const std::string& args) {
  std::filesystem::create_directories(kDir);
  const std::string cmd = std::string(VEFLUID_CLI) + " " + args + " 2>" + kDir + "/stderr.txt";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string stderr_text() { return slurp(kDir + "/stderr.txt"); }

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("creep writes the trajectory CSV") {
  const Result r = run("creep --tbar11 1 --eta-bar 10 --t-unload 10 --t-end 30 --samples 20");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("t_bar,B,lambda,T11_bar", 0) == 0);
  CHECK(stderr_text().find("audit: PASS") != std::string::npos);
}

TEST_CASE("relax with files, report and plot") {
  const std::string csv = kDir + "/relax.csv", rep = kDir + "/relax.json", gp = kDir + "/relax.gp";
  const Result r = run("relax --b0 2 --eta-bar 5 --samples 50 --out " + csv + " --report " + rep +
                       " --plot " + gp);
  CHECK(r.code == 0);
  CHECK(slurp(csv).rfind("t_bar,B,lambda,T11_bar", 0) == 0);
  CHECK(slurp(rep).find("\"passed\": true") != std::string::npos);
  CHECK(slurp(gp).find("multiplot layout 1,2") != std::string::npos);
}

TEST_CASE("identical scenarios give byte-identical CSV") {
  const Result a = run("creep --samples 30 --eta-bar 7");
  const Result b = run("creep --samples 30 --eta-bar 7");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("steady state") {
  CHECK(run("steady --tbar11 0").out == "B* = 1\n");
  CHECK(run("steady --tbar11 1").out.rfind("B* = 1.75487766", 0) == 0);
}

TEST_CASE("configuration errors exit with 2") {
  CHECK(run("creep --eta-bar -1").code == 2);
  CHECK(run("creep --unknown-flag 3").code == 2);
  CHECK(run("creep --variant cubic").code == 2);
  CHECK(run("creep --mu 1 --eta-p 1").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("run /nonexistent.json").code == 2);
  write(kDir + "/bad.json", "{\"schema\": 1, \"kind\": \"creep\", \"colour\": 1}");
  CHECK(run("run " + kDir + "/bad.json").code == 2);
  CHECK(stderr_text().find("/colour") != std::string::npos);
  CHECK(run("plot --figure fig2").code == 2);
  write(kDir + "/partial.csv", "t_bar,B\n0,1\n");
  CHECK(run("plot --figure fig2 " + kDir + "/partial.csv").code == 2);
  CHECK(stderr_text().find("lambda") != std::string::npos);
}

TEST_CASE("integration failures exit with 3") {
  write(kDir + "/budget.json",
        R"({"schema": 1, "kind": "creep", "integrator": {"max_steps": 3, "h_max": 0.001}})");
  CHECK(run("run " + kDir + "/budget.json").code == 3);
  CHECK(run("oned --tbar11 1").code == 3);
  CHECK(stderr_text().find("small-strain") != std::string::npos);
}

TEST_CASE("strict audit failure exits with 4") {
  // Simple shear is not coaxial, where the energy balance does not close.
  CHECK(run("general --shear-rate 1 --t-end 2 --samples 10").code == 0);
  CHECK(run("general --shear-rate 1 --t-end 2 --samples 10 --strict").code == 4);
  CHECK(run("general --samples 10 --strict --rotate 0 1 1 0.4").code == 0);
}

TEST_CASE("JSON scenario run") {
  const std::string csv = kDir + "/scenario.csv";
  write(kDir + "/ok.json", R"({"schema": 1, "kind": "creep", "params": {"eta_bar": 5},
    "integrator": {"samples": 10}, "output": {"csv": ")" + csv + R"("}})");
  CHECK(run("run " + kDir + "/ok.json --strict").code == 0);
  CHECK(slurp(csv).rfind("t_bar,B,lambda,T11_bar", 0) == 0);
}

TEST_CASE("one-dimensional reduction and verification") {
  const Result o = run("oned --samples 10");
  CHECK(o.code == 0);
  CHECK(o.out.rfind("t_bar,eps_G,eps_p,eps_total", 0) == 0);
  const Result v = run("verify --states 2 --oracle-samples 50 --strict");
  CHECK(v.code == 0);
  CHECK(v.out.find("2/2 states pass, 2/2 negative controls rejected") != std::string::npos);
}

TEST_CASE("sweep writes one file per grid point") {
  const std::string dir = kDir + "/sweep";
  std::filesystem::remove_all(dir);
  const Result r = run("sweep --tbar11 1 5 --eta-bar 5 10 --samples 10 --jobs 3 --out " + dir);
  CHECK(r.code == 0);
  for (const char* name : {"creep_T1_eta5", "creep_T1_eta10", "creep_T5_eta5", "creep_T5_eta10"}) {
    CHECK(std::filesystem::exists(dir + "/" + name + ".csv"));
    CHECK(std::filesystem::exists(dir + "/" + name + ".json"));
  }
}
