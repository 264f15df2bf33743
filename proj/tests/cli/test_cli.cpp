// Drives the built forensica binary end to end and checks transcripts.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct Run {
  std::string out;
  int code = -1;
};

Run sh(const std::string& cmd) {
  Run r;
  FILE* p = popen((cmd + " 2>&1").c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const std::string cli = FORENSICA_CLI;
const std::string work = FORENSICA_WORK_DIR;

std::string path(const std::string& name) { return work + "/" + name; }

void write(const std::string& file, const std::string& text) {
  std::ofstream(file) << text;
}

std::string slurp(const std::string& file) {
  std::ifstream in(file);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("generate twice gives identical files") {
  const std::string a = path("cli-a.forensica.json"), b = path("cli-b.forensica.json");
  for (const char* game : {"village", "station"}) {
    REQUIRE(sh(cli + " generate " + game + " --seed 42 --out " + a).code == 0);
    REQUIRE(sh(cli + " generate " + game + " --seed 42 --out " + b).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).size() > 1000);
  }
}

TEST_CASE("generate matches the committed golden file") {
  const std::string out = path("cli-golden.forensica.json");
  REQUIRE(sh(cli + " generate station --seed 7 --out " + out).code == 0);
  CHECK(slurp(out) == slurp(std::string(FORENSICA_GOLDEN_DIR) + "/station-7.forensica.json"));
}

TEST_CASE("invalid config exits 2 and names the field") {
  const std::string cfg = path("cli-bad.json");
  write(cfg, R"({"village":{"kill_rate":-1}})");
  const Run r = sh(cli + " generate village --seed 1 --config " + cfg + " --out " + path("cli-x.forensica.json"));
  CHECK(r.code == 2);
  CHECK(r.out.find("village.kill_rate") != std::string::npos);

  write(cfg, R"({"village":{"no_such_knob":1}})");
  CHECK(sh(cli + " generate village --config " + cfg).code == 2);
}

TEST_CASE("usage errors exit 2") {
  CHECK(sh(cli + " generate moon").code == 2);
  CHECK(sh(cli + " frobnicate").code == 2);
}

TEST_CASE("scripted play is deterministic") {
  const std::string world = path("cli-play.forensica.json");
  const std::string script = path("cli-play.txt");
  REQUIRE(sh(cli + " generate station --seed 9 --out " + world).code == 0);
  write(script, "w\nw\nd\nface n\nmap\nreport\nquit\n");
  const Run a = sh(cli + " play " + world + " --script " + script);
  const Run b = sh(cli + " play " + world + " --script " + script);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("> report") != std::string::npos);
  CHECK(a.out.find("score: 0 of") != std::string::npos);
}

TEST_CASE("json play emits one parseable response per line") {
  const std::string world = path("cli-json.forensica.json");
  const std::string script = path("cli-json.txt");
  REQUIRE(sh(cli + " generate village --seed 4 --out " + world).code == 0);
  write(script, "s\nd\nquit\n");
  const Run r = sh(cli + " play " + world + " --json --script " + script);
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    ++n;
    CHECK(line.front() == '{');
    CHECK(line.find("\"cmd\"") != std::string::npos);
  }
  CHECK(n >= 3);
}

TEST_CASE("revealed answers score the full crew") {
  const std::string world = path("cli-reveal.forensica.json");
  REQUIRE(sh(cli + " generate station --seed 5 --out " + world).code == 0);
  const std::string quit = path("cli-quit.txt");
  write(quit, "quit\n");

  CHECK(sh(cli + " play " + world + " --reveal --script " + quit).code == 2);

  const Run reveal = sh("FORENSICA_TEST=1 " + cli + " play " + world + " --reveal --script " + quit);
  REQUIRE(reveal.code == 0);
  std::istringstream lines(reveal.out);
  std::string line, claims;
  int crew = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("reveal ", 0) != 0) continue;
    ++crew;
    claims += "claim " + line.substr(7) + "\n";
  }
  REQUIRE(crew >= 5);
  REQUIRE(crew <= 6);

  const std::string script = path("cli-claims.txt");
  write(script, claims + "report\nquit\n");
  const Run scored = sh(cli + " play " + world + " --script " + script);
  CHECK(scored.code == 0);
  CHECK(scored.out.find("score: " + std::to_string(crew) + " of " + std::to_string(crew)) != std::string::npos);
}

TEST_CASE("village play ends with an exploration summary") {
  const std::string world = path("cli-village.forensica.json");
  REQUIRE(sh(cli + " generate village --seed 3 --out " + world).code == 0);
  const std::string script = path("cli-village.txt");
  write(script, "w\nw\na\n");
  const Run r = sh(cli + " play " + world + " --script " + script);
  CHECK(r.code == 0);
  CHECK(r.out.find("explored ") != std::string::npos);
  CHECK(r.out.find("in 3 turns") != std::string::npos);
}

TEST_CASE("calibrate with a single run") {
  const Run r = sh(cli + " calibrate village -n 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("1 runs") != std::string::npos);
  const Run j = sh(cli + " calibrate station -n 2 --json");
  CHECK(j.code == 0);
  CHECK(j.out.find('{') != std::string::npos);
}

TEST_CASE("validate accepts good files and rejects corrupt ones") {
  const std::string world = path("cli-valid.forensica.json");
  REQUIRE(sh(cli + " generate station --seed 2 --out " + world).code == 0);
  const Run ok = sh(cli + " validate " + world);
  CHECK(ok.code == 0);
  CHECK(ok.out.find("ok") != std::string::npos);

  const std::string bad = path("cli-corrupt.forensica.json");
  write(bad, R"({"format_version":1})");
  const Run r = sh(cli + " validate " + bad);
  CHECK(r.code == 1);
  CHECK(r.out.find("corrupt at /seed") != std::string::npos);

  write(bad, "{not json");
  CHECK(sh(cli + " validate " + bad).code == 1);
  CHECK(sh(cli + " validate " + path("does-not-exist.forensica.json")).code == 1);
}

TEST_CASE("trace prints the event log") {
  const Run r = sh(cli + " trace --seed 7");
  CHECK(r.code == 0);
  CHECK(r.out.find("sim-start") != std::string::npos);
  CHECK(r.out.find("sim-end") != std::string::npos);
}
