#include <gtest/gtest.h>

#include <cstring>
#include <string>

#include "test_util.hpp"
#include "textshield/textshield.h"

namespace {

class CApi : public ::testing::Test {
 protected:
  void SetUp() override { ASSERT_EQ(ts_context_create(&ctx), TS_OK); }
  void TearDown() override { ts_context_destroy(ctx); }

  std::string take(char* s) {
    std::string out = s;
    ts_free_string(s);
    return out;
  }

  ts_context* ctx = nullptr;
};

TEST_F(CApi, VersionAndStatusNames) {
  EXPECT_STRNE(ts_version(), "");
  EXPECT_STREQ(ts_status_name(TS_ERR_DATA), "data consistency error");
  EXPECT_STREQ(ts_last_error(ctx), "");
  EXPECT_EQ(ts_set_log_level("error"), TS_OK);
  EXPECT_EQ(ts_set_log_level("loud"), TS_ERR_USAGE);
}

TEST_F(CApi, Metrics) {
  size_t d = 0;
  ASSERT_EQ(ts_levenshtein("kitten", "sitting", &d), TS_OK);
  EXPECT_EQ(d, 3u);
  double v = 0;
  ASSERT_EQ(ts_normed_levenshtein("kitten", "sitting", &v), TS_OK);
  EXPECT_DOUBLE_EQ(v, 3.0 / 7.0);
  ASSERT_EQ(ts_bleu(ctx, "the cat", "the cat sat", 4, &v), TS_OK);
  EXPECT_NEAR(v, 0.60653065971263342, 1e-15);
  EXPECT_EQ(ts_bleu(ctx, "", "x", 4, &v), TS_ERR_USAGE);
  ASSERT_EQ(ts_rouge_l(ctx, "the dog", "the cat", &v), TS_OK);
  EXPECT_DOUBLE_EQ(v, 0.5);
  ASSERT_EQ(ts_cosine_sim("a b", "a c", &v), TS_OK);
  EXPECT_DOUBLE_EQ(v, 0.5);
  char* tokens = nullptr;
  ASSERT_EQ(ts_tokenize(ctx, "Total 发票", &tokens), TS_OK);
  EXPECT_EQ(take(tokens), R"(["total","发","票"])");
  EXPECT_EQ(ts_levenshtein(nullptr, "a", &d), TS_ERR_USAGE);
}

TEST_F(CApi, Geometry) {
  const double a[4] = {0, 0, 10, 10}, b[4] = {10, 0, 20, 10}, bad[4] = {5, 5, 5, 9};
  double v = 0;
  ASSERT_EQ(ts_diou(ctx, a, b, &v), TS_OK);
  EXPECT_DOUBLE_EQ(v, -0.2);
  EXPECT_EQ(ts_iou(ctx, a, bad, &v), TS_ERR_SCHEMA);
  EXPECT_STRNE(ts_last_error(ctx), "");
}

TEST_F(CApi, Masks) {
  std::string s(1024, '0');
  s[2 * 32 + 3] = '1';
  double box[4];
  ASSERT_EQ(ts_mask_min_bbox(ctx, s.c_str(), box), TS_OK);
  EXPECT_EQ(box[0], 3);
  EXPECT_EQ(box[3], 3);
  EXPECT_EQ(ts_mask_min_bbox(ctx, std::string(1024, '0').c_str(), box), TS_ERR_DATA);
  EXPECT_EQ(ts_mask_min_bbox(ctx, "01", box), TS_ERR_SCHEMA);

  textshield::testing::TempDir dir;
  const std::string path = (dir / "m.pgm").string();
  ASSERT_EQ(ts_mask_decode_to_file(ctx, s.c_str(), path.c_str()), TS_OK);
  char* back = nullptr;
  ASSERT_EQ(ts_mask_encode_file(ctx, path.c_str(), &back), TS_OK);
  EXPECT_EQ(take(back), s);
  EXPECT_EQ(ts_mask_encode_file(ctx, (dir / "none.pgm").string().c_str(), &back), TS_ERR_IO);
}

TEST_F(CApi, ParseAndRender) {
  char* raw = nullptr;
  ASSERT_EQ(ts_render_completion(ctx, R"({"id":"a","verdict":"real","reasoning":"a < b"})", &raw), TS_OK);
  const std::string completion = take(raw);
  char* parsed = nullptr;
  ASSERT_EQ(ts_parse_completion(ctx, completion.c_str(), &parsed), TS_OK);
  const auto j = textshield::Json::parse(take(parsed));
  EXPECT_EQ(j["format_ok"], true);
  EXPECT_EQ(j["think"], "a < b");
  EXPECT_EQ(ts_render_completion(ctx, R"({"id":"a","verdict":"tampered","reasoning":""})", &raw), TS_ERR_SCHEMA);
  EXPECT_EQ(ts_render_completion(ctx, "{not json", &raw), TS_ERR_SCHEMA);
}

TEST_F(CApi, Rewards) {
  const char* gt =
      R"({"id":"x","subset":"test","verdict":"tampered","method":"generation","text":"INVOICE","bbox":[0,0,10,10],"reasoning_annotation":""})";
  const char* pred =
      R"({"id":"x","verdict":"tampered","method":"generation","text":"INV0ICE","bbox":[0,0,10,10],"reasoning":""})";
  ts_reward_vector r{};
  ASSERT_EQ(ts_reward_all(ctx, pred, gt, nullptr, &r), TS_OK);
  ASSERT_TRUE(r.has_ocr);
  EXPECT_NEAR(r.ocr, 6.0 / 7.0, 1e-12);
  EXPECT_DOUBLE_EQ(r.composite, 4.0 + 6.0 / 7.0);

  const char* raw = R"({"id":"x","raw":"<answer>{\"verdict\":\"real\"}</answer>"})";
  ASSERT_EQ(ts_reward_all(ctx, raw, gt, nullptr, &r), TS_OK);
  EXPECT_EQ(r.format, 0.0);
  EXPECT_EQ(r.composite, 0.0);

  ts_reward_weights w = ts_default_weights();
  w.ocr = -1;
  EXPECT_EQ(ts_reward_all(ctx, pred, gt, &w, &r), TS_ERR_USAGE);
  EXPECT_EQ(ts_reward_all(ctx, R"({"id":"y","verdict":"real","reasoning":""})", gt, nullptr, &r), TS_ERR_DATA);

  const double rewards[4] = {1, 0, 1, 0};
  double adv[4];
  ASSERT_EQ(ts_group_advantages(ctx, rewards, 4, adv), TS_OK);
  EXPECT_EQ(adv[1], -1.0);
  EXPECT_EQ(ts_group_advantages(ctx, rewards, 1, adv), TS_ERR_USAGE);
}

TEST_F(CApi, Rectify) {
  const char* pred =
      R"({"id":"x","verdict":"tampered","method":"generation","text":"ACME","bbox":[105,98,150,118],"reasoning":""})";
  const char* layout =
      R"({"id":"x","instances":[{"text":"ACME","bbox":[0,0,40,20]},{"text":"ACME","bbox":[100,100,140,120]}]})";
  ts_rectify_outcome o{};
  ASSERT_EQ(ts_rectify(ctx, pred, layout, 0.2, &o), TS_OK);
  EXPECT_EQ(o.source, TS_RECTIFY_OCR_DIOU);
  EXPECT_EQ(o.matched_index, 1u);
  EXPECT_EQ(o.final_bbox[0], 100);
  EXPECT_EQ(ts_rectify(ctx, pred, layout, 1.5, &o), TS_ERR_USAGE);
  EXPECT_EQ(ts_rectify(ctx, R"({"id":"x","verdict":"real","reasoning":""})", layout, 0.2, &o), TS_ERR_DATA);
}

TEST_F(CApi, FilePipelines) {
  textshield::testing::TempDir dir;
  ts_fixture_options f = ts_default_fixture_options();
  f.n = 30;
  const std::string d = dir.path().string();
  ASSERT_EQ(ts_run_fixtures(ctx, &f, d.c_str()), TS_OK) << ts_last_error(ctx);
  const std::string pred = (dir / "predictions.jsonl").string(), gt = (dir / "groundtruth.jsonl").string(),
                    ocr = (dir / "ocr.jsonl").string(), rew = (dir / "r.jsonl").string(),
                    rect = (dir / "rect.jsonl").string();

  ts_reward_options ro{pred.c_str(), gt.c_str(), rew.c_str(), "cls=2", 0};
  EXPECT_EQ(ts_run_reward(ctx, &ro), TS_OK) << ts_last_error(ctx);
  ro.weights = "bogus=1";
  EXPECT_EQ(ts_run_reward(ctx, &ro), TS_ERR_USAGE);

  ts_rectify_options rc{pred.c_str(), ocr.c_str(), rect.c_str(), nullptr, 0.2};
  EXPECT_EQ(ts_run_rectify(ctx, &rc), TS_OK) << ts_last_error(ctx);

  ts_evaluate_options eo{pred.c_str(), gt.c_str(), nullptr, "json", nullptr, nullptr, 0, -1};
  char* report = nullptr;
  ASSERT_EQ(ts_run_evaluate(ctx, &eo, &report), TS_OK) << ts_last_error(ctx);
  EXPECT_EQ(textshield::Json::parse(take(report))["label"], "run");
  eo.format = "xml";
  EXPECT_EQ(ts_run_evaluate(ctx, &eo, &report), TS_ERR_USAGE);
  eo.format = "json";
  const std::string missing = (dir / "missing.jsonl").string();
  eo.groundtruth = missing.c_str();
  EXPECT_EQ(ts_run_evaluate(ctx, &eo, &report), TS_ERR_IO);
  EXPECT_NE(std::string(ts_last_error(ctx)).find("missing.jsonl"), std::string::npos);

  f.n = 0;
  EXPECT_EQ(ts_run_fixtures(ctx, &f, d.c_str()), TS_ERR_USAGE);
}

}  // namespace
