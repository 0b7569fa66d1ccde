// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(NIDT_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fixture(const char* name) { return std::string(NIDT_FIXTURE_DIR) + "/" + name; }

fs::path scratch(const char* name) {
  const fs::path p = fs::temp_directory_path() / ("nidt-cli-" + std::to_string(::getpid())) / name;
  fs::create_directories(p.parent_path());
  return p;
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("reduce --strategy foo x").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
}

TEST(Cli, BohmPrefix) {
  const Outcome r = run("bohm " + fixture("cu_f.lam") + " --depth 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "f (f (f ?))");
  const Outcome j = run("--json bohm '(\\x. x x) (\\x. x x)' --depth 2");
  ASSERT_EQ(j.code, 0);
  const auto v = nlohmann::json::parse(j.out);
  EXPECT_EQ(v.at("compact"), "bot");
  EXPECT_EQ(v.at("tree").at("loop"), true);
}

TEST(Cli, ReduceAndErrors) {
  const Outcome r = run("reduce '(\\x. x) y' --strategy hh");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 2), "y\n");
  const Outcome bad = run("reduce x --at 0");
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("PositionOutOfSupport"), std::string::npos);
  const Outcome syn = run("bohm '(\\x. '");
  EXPECT_EQ(syn.code, 1);
  EXPECT_NE(syn.out.find("SyntaxError"), std::string::npos);
}

TEST(Cli, CheckDerivations) {
  EXPECT_EQ(run("r0 check --deriv " + fixture("pi_prime_3.json")).code, 0);
  const Outcome s = run("s check --deriv " + fixture("p_ex.json"));
  EXPECT_EQ(s.code, 0);
  EXPECT_NE(s.out.find("quantitative: yes"), std::string::npos);
  // A broken axiom track is reported and fails the check.
  auto j = nlohmann::json::parse(std::ifstream(fixture("p_ex.json")));
  for (auto& n : j.at("nodes"))
    if (n.at("pos") == "02") n["track"] = 3;
  const fs::path p = scratch("broken.json");
  std::ofstream(p) << j.dump();
  const Outcome b = run("s check --deriv " + p.string());
  EXPECT_EQ(b.code, 1);
  EXPECT_NE(b.out.find("RuleMismatch"), std::string::npos);
  const fs::path q = scratch("schema.json");
  std::ofstream(q) << R"({"schema":"r0-derivation/1"})";
  const Outcome c = run("r0 check --deriv " + q.string());
  EXPECT_EQ(c.code, 1);
  EXPECT_NE(c.out.find("SchemaViolation"), std::string::npos);
}

TEST(Cli, FixturesAreUpToDate) {
  const Outcome r = run("fixtures --dir " + std::string(NIDT_FIXTURE_DIR));
  EXPECT_EQ(r.code, 0) << r.out;
  // A regenerated copy is byte identical to the checked-in corpus.
  const fs::path dir = scratch("fixtures");
  fs::remove_all(dir);
  ASSERT_EQ(run("fixtures --regen --dir " + dir.string()).code, 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(NIDT_FIXTURE_DIR)) {
    std::ifstream a(e.path()), b(dir / e.path().filename());
    const std::string sa((std::istreambuf_iterator<char>(a)), {}), sb((std::istreambuf_iterator<char>(b)), {});
    EXPECT_EQ(sa, sb) << e.path().filename();
    ++files;
  }
  EXPECT_GE(files, 18u);
  // A modified copy is detected.
  std::ofstream(dir / "omega.lam") << "x\n";
  EXPECT_NE(run("fixtures --dir " + dir.string()).code, 0);
  fs::remove_all(dir.parent_path());
}
