// textshield command line front end. Links only the C interface.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "textshield/textshield.h"

namespace {

int exit_code(ts_status status) {
  switch (status) {
    case TS_OK: return 0;
    case TS_ERR_USAGE: return 1;
    case TS_ERR_SCHEMA: return 2;
    case TS_ERR_IO: return 2;
    case TS_ERR_DATA: return 3;
    case TS_ERR_INTERNAL: return 4;
  }
  return 4;
}

class Context {
 public:
  Context() {
    if (ts_context_create(&ctx_) != TS_OK) {
      std::fputs("textshield: cannot allocate context\n", stderr);
      std::exit(4);
    }
  }
  ~Context() { ts_context_destroy(ctx_); }
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;

  ts_context* get() { return ctx_; }

  int report(ts_status status) {
    if (status != TS_OK) {
      const char* msg = ts_last_error(ctx_);
      std::fprintf(stderr, "textshield: %s: %s\n", ts_status_name(status), *msg ? msg : "failed");
    }
    return exit_code(status);
  }

 private:
  ts_context* ctx_ = nullptr;
};

// Takes ownership of a library string.
std::string take(char* s) {
  std::string out = s ? s : "";
  ts_free_string(s);
  return out;
}

void print_number(double v) { std::printf("%.17g\n", v); }

bool parse_box(const std::string& text, double out[4]) {
  std::istringstream in(text);
  std::string part;
  int i = 0;
  while (std::getline(in, part, ',')) {
    if (i == 4) return false;
    try {
      std::size_t used = 0;
      out[i] = std::stod(part, &used);
      if (used != part.size()) return false;
    } catch (...) {
      return false;
    }
    ++i;
  }
  return i == 4;
}

struct Options {
  unsigned jobs = 0;
  std::string log_level;

  std::string parse_in, parse_out, parse_diag;

  std::string reward_pred, reward_gt, reward_out, reward_weights;
  std::size_t reward_group = 0;

  std::string rect_pred, rect_ocr, rect_out, rect_audit;
  double rect_threshold = 0.2;

  std::string eval_pred, eval_gt, eval_out, eval_report = "md", eval_denominator = "tampered", eval_label = "run";
  bool eval_rectified = false;
  std::optional<long long> eval_max_unmatched;

  std::string mask_input, mask_string, mask_out;

  std::string metric_a, metric_b;
  int bleu_max_n = 4;

  ts_fixture_options fixtures = ts_default_fixture_options();
  std::string fixtures_dir;
};

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Deterministic forensic-output tooling: parsing, rewards, OCR rectification and evaluation."};
  app.name("textshield");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("textshield ") + ts_version());
  app.add_option("--jobs,-j", o.jobs, "Worker threads for batch stages (0 = available parallelism)")
      ->capture_default_str();
  app.add_option("--log-level", o.log_level, "trace, debug, info, warn, error or off (overrides TEXTSHIELD_LOG)");

  auto* parse = app.add_subcommand("parse", "Parse raw completions ({id, raw}) into predictions");
  parse->add_option("--in", o.parse_in, "raw_outputs.jsonl")->required();
  parse->add_option("--out", o.parse_out, "predictions.jsonl to write")->required();
  parse->add_option("--diagnostics", o.parse_diag, "Diagnostics sidecar (default <out>.diagnostics.jsonl)");

  auto* reward = app.add_subcommand("reward", "Score predictions against ground truth");
  reward->add_option("--pred", o.reward_pred, "Predictions or raw completions JSONL")->required();
  reward->add_option("--gt", o.reward_gt, "Ground-truth JSONL")->required();
  reward->add_option("--out", o.reward_out, "rewards.jsonl to write")->required();
  reward->add_option("--weights", o.reward_weights, "Composite weights, e.g. cls=1,method=1,loc=1,ocr=1,format=1");
  reward->add_option("--group-size", o.reward_group, "Consecutive completions per group; adds advantages");

  auto* rectify = app.add_subcommand("rectify", "Snap predicted boxes to matching OCR instances");
  rectify->add_option("--pred", o.rect_pred, "Predictions JSONL")->required();
  rectify->add_option("--ocr", o.rect_ocr, "OCR layouts JSONL")->required();
  rectify->add_option("--out", o.rect_out, "Rectified predictions to write")->required();
  rectify->add_option("--threshold", o.rect_threshold, "Maximum normalized edit distance for a match")
      ->capture_default_str();
  rectify->add_option("--audit", o.rect_audit, "Per-record audit JSONL");

  auto* evaluate = app.add_subcommand("evaluate", "Compute Cls/OCR/Loc/Res per subset");
  evaluate->add_option("--pred", o.eval_pred, "Predictions JSONL")->required();
  evaluate->add_option("--gt", o.eval_gt, "Ground-truth JSONL")->required();
  evaluate->add_option("--report", o.eval_report, "md, json or csv")
      ->check(CLI::IsMember({"md", "markdown", "json", "csv"}))
      ->capture_default_str();
  evaluate->add_option("--out", o.eval_out, "Write the report here instead of stdout");
  evaluate->add_flag("--rectified", o.eval_rectified, "Label the run as OCR-rectified");
  evaluate->add_option("--denominator", o.eval_denominator, "Average OCR/Loc over tampered regions or all images")
      ->check(CLI::IsMember({"tampered", "all"}))
      ->capture_default_str();
  evaluate->add_option("--label", o.eval_label, "Row label in the report")->capture_default_str();
  evaluate->add_option("--max-unmatched", o.eval_max_unmatched,
                       "Fail with exit 3 when more prediction ids lack ground truth (default unlimited)")
      ->check(CLI::NonNegativeNumber);

  auto* mask = app.add_subcommand("mask", "Mask string conversions");
  mask->require_subcommand(1);
  auto* mask_encode = mask->add_subcommand("encode", "PGM or mask-string file to the 1024-char mask string");
  mask_encode->add_option("input", o.mask_input, "PGM image or text file")->required();
  auto* mask_decode = mask->add_subcommand("decode", "Mask string to a 32x32 PGM");
  mask_decode->add_option("mask", o.mask_string, "1024-char mask string")->required();
  mask_decode->add_option("--out", o.mask_out, "PGM file to write")->required();

  auto* metrics = app.add_subcommand("metrics", "Evaluate a single metric primitive");
  metrics->require_subcommand(1);
  struct Metric {
    const char* name;
    const char* help;
  };
  const std::vector<Metric> pair_metrics = {
      {"lev", "Levenshtein distance over code points"},
      {"nlev", "Normalized Levenshtein distance"},
      {"bleu", "Sentence BLEU of hypothesis against reference"},
      {"rouge", "Rouge-L F-measure"},
      {"cosine", "Term-frequency cosine similarity"},
      {"iou", "IoU of two boxes given as x1,y1,x2,y2"},
      {"diou", "Distance-IoU of two boxes given as x1,y1,x2,y2"}};
  std::vector<CLI::App*> metric_cmds;
  for (const auto& m : pair_metrics) {
    auto* cmd = metrics->add_subcommand(m.name, m.help);
    cmd->add_option("a", o.metric_a, "First operand (hypothesis)")->required();
    cmd->add_option("b", o.metric_b, "Second operand (reference)")->required();
    if (std::string(m.name) == "bleu") cmd->add_option("--max-n", o.bleu_max_n, "Highest n-gram order");
    metric_cmds.push_back(cmd);
  }
  auto* tokenize = metrics->add_subcommand("tokenize", "Tokens as a JSON array");
  tokenize->add_option("text", o.metric_a, "Text to tokenize")->required();

  auto* fixtures = app.add_subcommand("fixtures", "Synthetic data");
  fixtures->require_subcommand(1);
  auto* gen = fixtures->add_subcommand("gen", "Write groundtruth.jsonl, ocr.jsonl and predictions.jsonl");
  auto& f = o.fixtures;
  gen->add_option("--out-dir", o.fixtures_dir, "Existing directory to write into")->required();
  gen->add_option("--seed", f.seed, "Random seed")->capture_default_str();
  gen->add_option("--n", f.n, "Number of images")->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--text-noise", f.text_noise, "Fraction of predicted characters substituted")
      ->capture_default_str();
  gen->add_option("--target-iou", f.target_iou, "Mean IoU of predicted boxes (1 = exact)")->capture_default_str();
  gen->add_option("--iou-spread", f.iou_spread, "Half-width of the per-image IoU band")->capture_default_str();
  gen->add_option("--reasoning-noise", f.reasoning_noise, "Fraction of reasoning words replaced")
      ->capture_default_str();
  gen->add_option("--verdict-error", f.verdict_error, "Probability of a wrong verdict")->capture_default_str();
  gen->add_option("--duplicate-rate", f.duplicate_rate, "Probability of a duplicate OCR instance of the target")
      ->capture_default_str();
  gen->add_option("--distractors", f.distractors, "Unrelated OCR instances per image")->capture_default_str();
  gen->add_option("--real-fraction", f.real_fraction, "Fraction of real images")->capture_default_str();
  gen->add_option("--generated-fraction", f.generated_fraction, "Fraction of fully generated images")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "textshield: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  if (!o.log_level.empty() && ts_set_log_level(o.log_level.c_str()) != TS_OK) {
    std::cerr << "textshield: unknown log level '" << o.log_level << "'\n";
    return 1;
  }

  Context ctx;
  ts_context_set_jobs(ctx.get(), o.jobs);

  if (*parse) {
    return ctx.report(ts_run_parse(ctx.get(), o.parse_in.c_str(), o.parse_out.c_str(),
                                   o.parse_diag.empty() ? nullptr : o.parse_diag.c_str()));
  }
  if (*reward) {
    ts_reward_options r{o.reward_pred.c_str(), o.reward_gt.c_str(), o.reward_out.c_str(),
                        o.reward_weights.empty() ? nullptr : o.reward_weights.c_str(), o.reward_group};
    if (reward->count("--group-size") && o.reward_group < 2) {
      std::cerr << "textshield: --group-size must be at least 2\n";
      return 1;
    }
    return ctx.report(ts_run_reward(ctx.get(), &r));
  }
  if (*rectify) {
    ts_rectify_options r{o.rect_pred.c_str(), o.rect_ocr.c_str(), o.rect_out.c_str(),
                         o.rect_audit.empty() ? nullptr : o.rect_audit.c_str(), o.rect_threshold};
    return ctx.report(ts_run_rectify(ctx.get(), &r));
  }
  if (*evaluate) {
    ts_evaluate_options e{o.eval_pred.c_str(),
                          o.eval_gt.c_str(),
                          o.eval_out.empty() ? nullptr : o.eval_out.c_str(),
                          o.eval_report.c_str(),
                          o.eval_denominator.c_str(),
                          o.eval_label.c_str(),
                          o.eval_rectified ? 1 : 0,
                          o.eval_max_unmatched ? static_cast<int64_t>(*o.eval_max_unmatched) : -1};
    char* report = nullptr;
    const ts_status status = ts_run_evaluate(ctx.get(), &e, &report);
    const std::string text = take(report);
    if (status == TS_OK && o.eval_out.empty()) std::fwrite(text.data(), 1, text.size(), stdout);
    return ctx.report(status);
  }
  if (*mask_encode) {
    char* out = nullptr;
    const ts_status status = ts_mask_encode_file(ctx.get(), o.mask_input.c_str(), &out);
    if (status == TS_OK) std::printf("%s\n", take(out).c_str());
    return ctx.report(status);
  }
  if (*mask_decode) {
    return ctx.report(ts_mask_decode_to_file(ctx.get(), o.mask_string.c_str(), o.mask_out.c_str()));
  }
  if (*tokenize) {
    char* out = nullptr;
    const ts_status status = ts_tokenize(ctx.get(), o.metric_a.c_str(), &out);
    if (status == TS_OK) std::printf("%s\n", take(out).c_str());
    return ctx.report(status);
  }
  for (auto* cmd : metric_cmds) {
    if (!*cmd) continue;
    const std::string name = cmd->get_name();
    const char* a = o.metric_a.c_str();
    const char* b = o.metric_b.c_str();
    double value = 0.0;
    ts_status status = TS_OK;
    if (name == "lev") {
      std::size_t d = 0;
      status = ts_levenshtein(a, b, &d);
      if (status == TS_OK) std::printf("%zu\n", d);
      return ctx.report(status);
    }
    if (name == "nlev") {
      status = ts_normed_levenshtein(a, b, &value);
    } else if (name == "bleu") {
      status = ts_bleu(ctx.get(), a, b, o.bleu_max_n, &value);
    } else if (name == "rouge") {
      status = ts_rouge_l(ctx.get(), a, b, &value);
    } else if (name == "cosine") {
      status = ts_cosine_sim(a, b, &value);
    } else {
      double ba[4], bb[4];
      if (!parse_box(o.metric_a, ba) || !parse_box(o.metric_b, bb)) {
        std::cerr << "textshield: boxes must be four comma-separated numbers x1,y1,x2,y2\n";
        return 1;
      }
      status = name == "iou" ? ts_iou(ctx.get(), ba, bb, &value) : ts_diou(ctx.get(), ba, bb, &value);
    }
    if (status == TS_OK) print_number(value);
    return ctx.report(status);
  }
  if (*gen) {
    return ctx.report(ts_run_fixtures(ctx.get(), &o.fixtures, o.fixtures_dir.c_str()));
  }
  std::cerr << app.help();
  return 1;
}
