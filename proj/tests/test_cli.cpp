#include "doctest.h"
#include "json.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <string>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(CMPART_BIN) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  while (std::size_t k = fread(buf, 1, sizeof buf, p)) r.out.append(buf, k);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

using ojson = nlohmann::ordered_json;

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("compute 0").code == 2);
  CHECK(run("compute -3").code == 2);
  CHECK(run("reduce 1 4").code == 2);
  CHECK(run("reduce 1 7 --bits notanumber").code == 2);
}

TEST_CASE("class polynomial for n = 2") {
  Run r = run("classpoly 2 --json");
  REQUIRE(r.code == 0);
  ojson j = ojson::parse(r.out);
  CHECK(j["delta"] == "-47");
  CHECK(j["h"] == "5");
  CHECK(j["H"] == ojson::parse(R"(["1454023/47","1092873176/2209","-65838","169659/47","-94","1"])"));
}

TEST_CASE("JSON output is deterministic and survives a parse/dump round trip") {
  Run a = run("reduce 1 5 --json"), b = run("--json reduce 1 5");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  ojson j = ojson::parse(a.out);
  CHECK(j.dump() + "\n" == a.out);
  CHECK(j["verdict_ss_trace"] == true);
  CHECK(j["p_mod_ell"] == "1");
}

TEST_CASE("reduce at a split prime only factors") {
  Run r = run("reduce 4 13 --json");
  CHECK(r.code == 0);
  ojson j = ojson::parse(r.out);
  CHECK(j["kronecker"] == "1");
}

TEST_CASE("sweep and Brandt subcommands") {
  Run s = run("sweep 5 1 --n-max 300 --json");
  CHECK(s.code == 0);
  CHECK(ojson::parse(s.out)["counterexamples"].empty());
  CHECK(run("sweep 13 1 --n-max 20").code == 2);
  Run b = run("brandt 13 --json");
  REQUIRE(b.code == 0);
  ojson j = ojson::parse(b.out);
  CHECK(j["s"] == "12");
  CHECK(j["mass_ok"] == true);
  CHECK(j["hecke"] == true);
}

TEST_CASE("strict Watson-Atkin valuation check fails with 4") {
  Run r = run("modeq 5 --json");
  REQUIRE(r.code == 0);
  CHECK(run("modeq 5 --strict-wa").code == 4);
}

TEST_CASE("compute reproduces small partition numbers") {
  Run r = run("compute 2 --json");
  REQUIRE(r.code == 0);
  ojson j = ojson::parse(r.out);
  CHECK(j["p_oracle"] == "2");
  CHECK(j["p_cm_trace"] == "2");
  CHECK(j["crt"]["value"] == "2");
  CHECK(j["agree"] == true);
}
