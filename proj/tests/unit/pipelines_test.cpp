#include <gtest/gtest.h>

#include "test_util.hpp"
#include "textshield/fixtures.hpp"
#include "textshield/geometry.hpp"
#include "textshield/jsonl.hpp"
#include "textshield/mask.hpp"
#include "textshield/pipelines.hpp"
#include "textshield/schema.hpp"

namespace textshield {
namespace {

using testing::read_text;
using testing::TempDir;
using testing::write_text;

TEST(Jsonl, BlankLinesAndCrlf) {
  const auto lines = parse_jsonl("{\"a\":1}\r\n\n  \n{\"a\":2}");
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[1].line_no, 4u);
  EXPECT_EQ(lines[1].value["a"], 2);
}

TEST(Jsonl, BadLineNamesLocation) {
  try {
    parse_jsonl("{}\n{oops", "f.jsonl");
    FAIL();
  } catch (const SchemaViolation& e) {
    EXPECT_NE(std::string(e.what()).find("f.jsonl:2"), std::string::npos);
  }
}

TEST(Jsonl, MissingFileIsIoError) {
  EXPECT_THROW(read_jsonl("/nonexistent/x.jsonl"), IoError);
}

TEST(Jsonl, LoadReportsEveryViolation) {
  TempDir dir;
  write_text(dir / "p.jsonl", "{\"id\":\"a\",\"verdict\":\"real\"}\n{\"id\":\"b\",\"verdict\":\"nope\",\"reasoning\":\"\"}\n");
  try {
    load_predictions(dir / "p.jsonl");
    FAIL();
  } catch (const SchemaViolation& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("p.jsonl:1: reasoning"), std::string::npos) << msg;
    EXPECT_NE(msg.find("p.jsonl:2: verdict"), std::string::npos) << msg;
  }
}

TEST(WriteFileAtomic, ReplacesWithoutLeftovers) {
  TempDir dir;
  write_file_atomic(dir / "out.txt", "one");
  write_file_atomic(dir / "out.txt", "two");
  EXPECT_EQ(read_text(dir / "out.txt"), "two");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++files;
  EXPECT_EQ(files, 1u);
  EXPECT_THROW(write_file_atomic(dir / "missing" / "x.txt", "z"), IoError);
}

TEST(Fixtures, DeterministicPerSeed) {
  FixtureParams p;
  p.n = 50;
  TempDir a, b;
  write_fixtures(generate_fixtures(p), a.path());
  write_fixtures(generate_fixtures(p), b.path());
  for (const char* f : {"groundtruth.jsonl", "ocr.jsonl", "predictions.jsonl"}) {
    EXPECT_EQ(read_text(a / f), read_text(b / f)) << f;
  }
  p.seed = 8;
  TempDir c;
  write_fixtures(generate_fixtures(p), c.path());
  EXPECT_NE(read_text(a / "predictions.jsonl"), read_text(c / "predictions.jsonl"));
}

TEST(Fixtures, GroundTruthBoxesAppearInLayout) {
  FixtureParams p;
  p.n = 200;
  const FixtureSet set = generate_fixtures(p);
  for (std::size_t i = 0; i < set.groundtruth.size(); ++i) {
    const auto& g = set.groundtruth[i];
    EXPECT_EQ(set.layouts[i].id, g.id);
    if (g.verdict != Verdict::Tampered) continue;
    bool found = false;
    for (const auto& inst : set.layouts[i].instances) found = found || (inst.bbox == *g.bbox && inst.text == *g.text);
    EXPECT_TRUE(found) << g.id;
  }
}

TEST(Fixtures, PerfectPredictionsScoreFullMarks) {
  FixtureParams p;
  p.n = 200;
  const FixtureSet set = generate_fixtures(p);
  const MetricReport r = evaluate(set.predictions, set.groundtruth);
  for (const auto& [subset, m] : r.subsets) {
    EXPECT_DOUBLE_EQ(m.cls_acc, 100.0);
    EXPECT_DOUBLE_EQ(*m.ocr_score, 100.0);
    EXPECT_DOUBLE_EQ(*m.loc_iou, 100.0);
    EXPECT_NEAR(m.res_score, 100.0, 1e-9);
  }
}

TEST(Fixtures, JitterHitsTargetBand) {
  FixtureParams p;
  p.target_iou = 0.35;
  const FixtureSet set = generate_fixtures(p);
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < set.predictions.size(); ++i) {
    if (!set.predictions[i].bbox || !set.groundtruth[i].bbox) continue;
    sum += iou(*set.predictions[i].bbox, *set.groundtruth[i].bbox);
    ++n;
  }
  const double mean = sum / static_cast<double>(n);
  EXPECT_GE(mean, 0.30);
  EXPECT_LE(mean, 0.40);
}

TEST(Fixtures, RejectsZeroCount) {
  FixtureParams p;
  p.n = 0;
  EXPECT_THROW(generate_fixtures(p), Error);
}

class PipelineFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    FixtureParams p;
    p.n = 40;
    p.text_noise = 0.1;
    p.target_iou = 0.35;
    write_fixtures(generate_fixtures(p), dir.path());
  }
  TempDir dir;
};

TEST_F(PipelineFiles, ParseEmitsPredictionsAndSidecar) {
  write_text(dir / "raw.jsonl",
             "{\"id\":\"a\",\"raw\":\"<think>x</think><answer>{\\\"verdict\\\":\\\"real\\\"}</answer>\"}\n"
             "{\"id\":\"b\",\"raw\":\"garbage\"}\n");
  ParseJob job{dir / "raw.jsonl", dir / "pred.jsonl", dir / "diag.jsonl", 2};
  const ParseSummary s = run_parse(job);
  EXPECT_EQ(s.lines, 2u);
  EXPECT_EQ(s.emitted, 1u);
  EXPECT_EQ(load_predictions(dir / "pred.jsonl").size(), 1u);
  const auto diag = read_jsonl(dir / "diag.jsonl");
  ASSERT_EQ(diag.size(), 2u);
  EXPECT_EQ(diag[1].value["emitted"], false);
  EXPECT_EQ(diag[1].value["format_ok"], false);
}

TEST_F(PipelineFiles, ParseRejectsMalformedInputBeforeWriting) {
  write_text(dir / "raw.jsonl", "{\"id\":\"a\"}\n");
  ParseJob job{dir / "raw.jsonl", dir / "pred.jsonl", dir / "diag.jsonl", 1};
  EXPECT_THROW(run_parse(job), SchemaViolation);
  EXPECT_FALSE(std::filesystem::exists(dir / "pred.jsonl"));
}

TEST_F(PipelineFiles, RewardWithGroups) {
  RewardJob job;
  job.predictions = dir / "predictions.jsonl";
  job.groundtruth = dir / "groundtruth.jsonl";
  job.output = dir / "rewards.jsonl";
  job.group_size = 4;
  EXPECT_EQ(run_reward(job), 40u);
  const auto lines = read_jsonl(job.output);
  ASSERT_EQ(lines.size(), 40u);
  EXPECT_EQ(lines[0].value["id"], "img000000");
  EXPECT_EQ(lines[7].value["group"], 1);
  EXPECT_TRUE(lines[0].value.contains("advantage"));

  job.group_size = 3;
  EXPECT_THROW(run_reward(job), DataError);
  job.group_size = 1;
  EXPECT_THROW(run_reward(job), UsageError);
}

TEST_F(PipelineFiles, RewardUnknownIdIsDataError) {
  write_text(dir / "p.jsonl", "{\"id\":\"nobody\",\"verdict\":\"real\",\"reasoning\":\"\"}\n");
  RewardJob job;
  job.predictions = dir / "p.jsonl";
  job.groundtruth = dir / "groundtruth.jsonl";
  job.output = dir / "r.jsonl";
  EXPECT_THROW(run_reward(job), DataError);
}

TEST_F(PipelineFiles, RectifyThenEvaluateChangesOnlyLoc) {
  RectifyJob rj;
  rj.predictions = dir / "predictions.jsonl";
  rj.ocr = dir / "ocr.jsonl";
  rj.output = dir / "rect.jsonl";
  rj.audit = dir / "audit.jsonl";
  const RectifySummary s = run_rectify(rj);
  EXPECT_EQ(s.records, 40u);
  EXPECT_EQ(read_jsonl(*rj.audit).size(), 40u);

  EvaluateJob before;
  before.predictions = dir / "predictions.jsonl";
  before.groundtruth = dir / "groundtruth.jsonl";
  before.format = ReportFormat::Json;
  EvaluateJob after = before;
  after.predictions = rj.output;
  const Json a = Json::parse(run_evaluate(before));
  const Json b = Json::parse(run_evaluate(after));
  for (const auto& [name, m] : a["subsets"].items()) {
    if (m.is_null()) continue;
    EXPECT_EQ(m["cls"], b["subsets"][name]["cls"]);
    EXPECT_EQ(m["ocr"], b["subsets"][name]["ocr"]);
    EXPECT_EQ(m["res"], b["subsets"][name]["res"]);
  }
}

TEST_F(PipelineFiles, EvaluateErrors) {
  EvaluateJob job;
  job.predictions = dir / "predictions.jsonl";
  job.groundtruth = dir / "nope.jsonl";
  try {
    run_evaluate(job);
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("nope.jsonl"), std::string::npos);
  }
  write_text(dir / "extra.jsonl", "{\"id\":\"zz\",\"verdict\":\"real\",\"reasoning\":\"\"}\n");
  job.groundtruth = dir / "groundtruth.jsonl";
  job.predictions = dir / "extra.jsonl";
  job.max_unmatched = 0;
  EXPECT_THROW(run_evaluate(job), DataError);
  job.max_unmatched = 1;
  EXPECT_NO_THROW(run_evaluate(job));
}

TEST_F(PipelineFiles, EvaluateRectifiedLabel) {
  EvaluateJob job;
  job.predictions = dir / "predictions.jsonl";
  job.groundtruth = dir / "groundtruth.jsonl";
  job.label = "ours";
  job.rectified = true;
  EXPECT_NE(run_evaluate(job).find("| ours + OCR rect. |"), std::string::npos);
}

TEST_F(PipelineFiles, MaskEncodeDecode) {
  MaskGrid m(32, 32);
  m.set(0, 5, 1);
  const std::string s = encode_mask_string(m);
  run_mask_decode(s, dir / "m.pgm");
  EXPECT_EQ(run_mask_encode(dir / "m.pgm"), s);
  write_text(dir / "m.txt", s + "\n");
  EXPECT_EQ(run_mask_encode(dir / "m.txt"), s);
  EXPECT_THROW(run_mask_encode(dir / "absent.pgm"), IoError);
}

}  // namespace
}  // namespace textshield
