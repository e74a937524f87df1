#include <gtest/gtest.h>

#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "test_util.hpp"

namespace {

using textshield::testing::read_text;
using textshield::testing::TempDir;

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(TEXTSHIELD_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    ASSERT_EQ(run("fixtures gen --n 60 --text-noise 0.1 --target-iou 0.35 --out-dir " + q(dir.path())).code, 0);
  }
  TempDir dir;
};

TEST_F(Cli, EvaluateJsonToStdout) {
  const Result r = run("evaluate --pred " + q(dir / "predictions.jsonl") + " --gt " + q(dir / "groundtruth.jsonl") +
                       " --report json");
  EXPECT_EQ(r.code, 0);
  EXPECT_NO_THROW(textshield::Json::parse(r.out));
}

TEST_F(Cli, UsageAndSchemaAndDataExitCodes) {
  EXPECT_EQ(run("evaluate --pred x --gt y --bogus").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("evaluate --pred " + q(dir / "predictions.jsonl") + " --gt " + q(dir / "missing.jsonl")).code, 2);
  textshield::testing::write_text(dir / "bad.jsonl", "{\"id\":\"a\"}\n");
  EXPECT_EQ(run("evaluate --pred " + q(dir / "bad.jsonl") + " --gt " + q(dir / "groundtruth.jsonl")).code, 2);
  textshield::testing::write_text(dir / "extra.jsonl", "{\"id\":\"zz\",\"verdict\":\"real\",\"reasoning\":\"\"}\n");
  EXPECT_EQ(run("evaluate --max-unmatched 0 --pred " + q(dir / "extra.jsonl") + " --gt " +
                q(dir / "groundtruth.jsonl"))
                .code,
            3);
  EXPECT_EQ(run("reward --group-size 7 --pred " + q(dir / "predictions.jsonl") + " --gt " +
                q(dir / "groundtruth.jsonl") + " --out " + q(dir / "r.jsonl"))
                .code,
            3);
}

TEST_F(Cli, HelpAndVersion) {
  const Result help = run("rectify --help");
  EXPECT_EQ(help.code, 0);
  for (const char* flag : {"--pred", "--ocr", "--out", "--threshold", "--audit"}) {
    EXPECT_NE(help.out.find(flag), std::string::npos) << flag;
  }
  const Result v = run("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("textshield"), std::string::npos);
}

TEST_F(Cli, RectifyChain) {
  ASSERT_EQ(run("rectify --pred " + q(dir / "predictions.jsonl") + " --ocr " + q(dir / "ocr.jsonl") + " --out " +
                q(dir / "rect.jsonl") + " --threshold 0.2 --audit " + q(dir / "audit.jsonl"))
                .code,
            0);
  const Result r = run("evaluate --rectified --pred " + q(dir / "rect.jsonl") + " --gt " +
                       q(dir / "groundtruth.jsonl") + " --out " + q(dir / "report.md"));
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(read_text(dir / "report.md").find("run + OCR rect."), std::string::npos);
}

TEST_F(Cli, Metrics) {
  EXPECT_EQ(run("metrics lev kitten sitting").out, "3\n");
  EXPECT_EQ(run("metrics iou 0,0,10,10 5,0,15,10").out, "0.33333333333333331\n");
  EXPECT_EQ(run("metrics diou 0,0,10,10 10,0,20,10").out, "-0.20000000000000001\n");
  EXPECT_EQ(run("metrics tokenize 'The cat'").out, "[\"the\",\"cat\"]\n");
  EXPECT_EQ(run("metrics iou 0,0,10 1,1,2,2").code, 1);
}

TEST_F(Cli, ParseAndMask) {
  textshield::testing::write_text(
      dir / "raw.jsonl", "{\"id\":\"a\",\"raw\":\"<think>x</think><answer>{\\\"verdict\\\":\\\"real\\\"}</answer>\"}\n");
  EXPECT_EQ(run("parse --in " + q(dir / "raw.jsonl") + " --out " + q(dir / "p.jsonl")).code, 0);
  EXPECT_FALSE(read_text(dir / "p.jsonl.diagnostics.jsonl").empty());

  const std::string s = std::string(100, '0') + "1" + std::string(923, '0');
  EXPECT_EQ(run("mask decode " + s + " --out " + q(dir / "m.pgm")).code, 0);
  EXPECT_EQ(run("mask encode " + q(dir / "m.pgm")).out, s + "\n");
  EXPECT_EQ(run("mask decode 0101 --out " + q(dir / "x.pgm")).code, 2);
}

}  // namespace
