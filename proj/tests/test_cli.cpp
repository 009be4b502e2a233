#include <sslocus/commands.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace sslocus::cli;

namespace {

struct ProcessResult {
  int code;
  std::string out;
};

ProcessResult run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + std::string(SSLOCUS_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  int st = pclose(f);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

json strip_time(json j) {
  j.erase("wall_time_ms");
  return j;
}

}  // namespace

TEST(CliProcess, ExitCodes) {
  EXPECT_EQ(run("solve 4").code, 0);
  EXPECT_EQ(run("classes --g 0").code, 2);
  EXPECT_EQ(run("classes --g 5").code, 2);
  EXPECT_EQ(run("verify nonsense").code, 2);
  EXPECT_EQ(run("--no-such-flag").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("verify counts --p 4").code, 2);
  EXPECT_EQ(run("verify dieudonne --g 3 --precision 4").code, 2);
}

TEST(CliProcess, StructuredOutputIsDeterministic) {
  const std::string args = "verify dieudonne --g 3 --p 2 --trials 20 --seed 7 --format structured";
  ProcessResult a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0);
  json ja = json::parse(a.out), jb = json::parse(b.out);
  EXPECT_TRUE(ja.contains("wall_time_ms"));
  EXPECT_EQ(strip_time(ja).dump(), strip_time(jb).dump());
  // implication test present and passing
  bool found = false;
  for (const auto& it : ja["items"])
    if (it["name"] == "criterion implies all slopes 1/2") {
      found = true;
      EXPECT_EQ(it["status"], "pass");
    }
  EXPECT_TRUE(found);
}

TEST(CliProcess, SchemaFields) {
  ProcessResult r = run("solve 4 --format structured");
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["schema"], kSchema);
  EXPECT_EQ(j["command"], "solve");
  EXPECT_EQ(j["parameters"]["g"], 4);
  for (const auto& it : j["items"]) {
    for (const char* k : {"section", "name", "expected", "computed", "status"}) EXPECT_TRUE(it.contains(k)) << k;
  }
  std::size_t findings = 0;
  for (const auto& it : j["items"])
    if (it["section"] == "crosscheck") {
      EXPECT_TRUE(it["status"] == "pass" || it["status"] == "finding");
      findings += it["status"] == "finding";
    }
  EXPECT_EQ(findings, 2u);
}

TEST(CliProcess, EnvironmentSelectsFormat) {
  ProcessResult r = run("solve 3", "SSLOCUS_FORMAT=structured");
  ASSERT_EQ(r.code, 0);
  json parsed;
  EXPECT_NO_THROW(parsed = json::parse(r.out));
  ProcessResult t = run("solve 3 --format table", "SSLOCUS_FORMAT=structured");
  EXPECT_NE(t.out.find("== solve"), std::string::npos);
}

TEST(CliProcess, OutputFile) {
  const std::string path = ::testing::TempDir() + "sslocus_report.json";
  ProcessResult r = run("classes --g 2 --p 3 --format structured --output " + path);
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  json j = json::parse(ss.str());
  EXPECT_EQ(j["command"], "classes");
}

TEST(Commands, ClassesValues) {
  Report r = cmd_classes(1, 5u);
  bool seen = false;
  for (const auto& it : r.items)
    if (it.name == "[S_g] coefficient at p=5") {
      seen = true;
      EXPECT_EQ(it.computed, "4");
    }
  EXPECT_TRUE(seen);
  EXPECT_EQ(r.exit_code(), 0);
  EXPECT_THROW(cmd_classes(0), std::invalid_argument);
  EXPECT_THROW(cmd_classes(2, 4u), std::invalid_argument);
}

TEST(Commands, SolveReports) {
  Report r4 = cmd_solve(4);
  EXPECT_EQ(r4.count(Status::fail), 0u);
  EXPECT_EQ(r4.count(Status::finding), 2u);
  EXPECT_EQ(r4.exit_code(), 0);
  Report r3 = cmd_solve(3);
  EXPECT_EQ(r3.count(Status::fail), 0u);
  EXPECT_EQ(r3.count(Status::pass), 4u);
  EXPECT_THROW(cmd_solve(5), std::invalid_argument);
}

TEST(Commands, VerifySuitesPass) {
  Options o;
  o.p = 2;
  Report counts = cmd_verify("counts", o);
  EXPECT_EQ(counts.count(Status::fail), 0u);
  EXPECT_EQ(counts.count(Status::inconclusive), 0u);
  Report ids = cmd_verify("identities", o);
  EXPECT_EQ(ids.count(Status::fail), 0u);
  EXPECT_THROW(cmd_verify("bogus", o), std::invalid_argument);
}

TEST(Commands, BudgetExhaustionIsInconclusive) {
  Report r = cmd_verify_counts(2, 50, 1, 5);
  EXPECT_GT(r.count(Status::inconclusive), 0u);
  EXPECT_EQ(r.count(Status::fail), 0u);
}

TEST(ReportModel, ExitCodeContract) {
  Report r;
  r.command = "x";
  r.add("s", "a", "1", "1", Status::pass);
  r.add("s", "b", "1", "2", Status::finding);
  EXPECT_EQ(r.exit_code(), 0);
  r.add("s", "c", "1", "2", Status::inconclusive);
  EXPECT_EQ(r.exit_code(), 0);
  r.add("s", "d", "1", "2", Status::fail);
  EXPECT_EQ(r.exit_code(), 1);
  json j = r.to_json(false);
  EXPECT_FALSE(j.contains("wall_time_ms"));
  EXPECT_EQ(j["summary"]["fail"], 1);
  EXPECT_NE(r.to_table().find("FAIL"), std::string::npos);
}
