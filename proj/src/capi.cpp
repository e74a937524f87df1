#include "textshield/textshield.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "textshield/eval_harness.hpp"
#include "textshield/geometry.hpp"
#include "textshield/grounding.hpp"
#include "textshield/jsonl.hpp"
#include "textshield/log.hpp"
#include "textshield/mask.hpp"
#include "textshield/ocr_rectify.hpp"
#include "textshield/output_parser.hpp"
#include "textshield/pipelines.hpp"
#include "textshield/rewards.hpp"
#include "textshield/schema.hpp"
#include "textshield/text_metrics.hpp"
#include "textshield/version.hpp"

struct ts_context {
  std::string last_error;
  unsigned jobs = 0;
};

namespace {

using namespace textshield;

ts_status classify(std::string& message) {
  try {
    throw;
  } catch (const UsageError& e) {
    message = e.what();
    return TS_ERR_USAGE;
  } catch (const SchemaViolation& e) {
    message = e.what();
    return TS_ERR_SCHEMA;
  } catch (const BadMaskString& e) {
    message = e.what();
    return TS_ERR_SCHEMA;
  } catch (const DataError& e) {
    message = e.what();
    return TS_ERR_DATA;
  } catch (const EmptyMask& e) {
    message = e.what();
    return TS_ERR_DATA;
  } catch (const NotTampered& e) {
    message = e.what();
    return TS_ERR_DATA;
  } catch (const NotRealImage& e) {
    message = e.what();
    return TS_ERR_DATA;
  } catch (const IoError& e) {
    message = e.what();
    return TS_ERR_IO;
  } catch (const Error& e) {
    message = e.what();
    return TS_ERR_USAGE;
  } catch (const nlohmann::json::exception& e) {
    message = std::string("invalid JSON: ") + e.what();
    return TS_ERR_SCHEMA;
  } catch (const std::exception& e) {
    message = std::string("internal error: ") + e.what();
    return TS_ERR_INTERNAL;
  } catch (...) {
    message = "internal error";
    return TS_ERR_INTERNAL;
  }
}

template <class Fn>
ts_status guarded(ts_context* ctx, Fn&& fn) {
  std::string message;
  ts_status status = TS_OK;
  try {
    fn();
  } catch (...) {
    status = classify(message);
  }
  if (ctx) ctx->last_error = message;
  return status;
}

void require(bool condition, const char* what) {
  if (!condition) throw UsageError(what);
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

Json parse_json_arg(const char* text, const char* what) {
  require(text != nullptr, what);
  const Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw SchemaViolation(std::string(what) + " is not valid JSON");
  return j;
}

template <class T>
T unwrap(Validated<T> v, const char* what) {
  if (v) return std::move(v).value();
  std::string msg = what;
  for (const auto& e : v.errors()) msg += "; " + e.to_string();
  throw SchemaViolation(msg);
}

BBox box_arg(const double c[4]) {
  require(c != nullptr, "box pointer is null");
  return BBox::make(c[0], c[1], c[2], c[3]);
}

void copy_box(const BBox& b, double out[4]) {
  out[0] = b.x1;
  out[1] = b.y1;
  out[2] = b.x2;
  out[3] = b.y2;
}

ScoredCompletion completion_arg(const char* prediction_json) {
  const Json j = parse_json_arg(prediction_json, "prediction");
  if (j.is_object() && j.contains("raw") && !j.contains("verdict")) {
    if (!j.contains("id") || !j["id"].is_string() || !j["raw"].is_string()) {
      throw SchemaViolation("raw completion needs string id and raw");
    }
    return completion_from_parse(j["id"].get<std::string>(), parse_completion(j["raw"].get<std::string>()));
  }
  return completion_from_record(unwrap(validate_prediction(j), "invalid prediction"));
}

}  // namespace

extern "C" {

const char* ts_version(void) { return textshield::kVersion; }

const char* ts_status_name(ts_status status) {
  switch (status) {
    case TS_OK: return "ok";
    case TS_ERR_USAGE: return "usage error";
    case TS_ERR_SCHEMA: return "schema error";
    case TS_ERR_DATA: return "data consistency error";
    case TS_ERR_IO: return "i/o error";
    case TS_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

ts_status ts_context_create(ts_context** out) {
  if (!out) return TS_ERR_USAGE;
  *out = new (std::nothrow) ts_context();
  return *out ? TS_OK : TS_ERR_INTERNAL;
}

void ts_context_destroy(ts_context* ctx) { delete ctx; }

const char* ts_last_error(const ts_context* ctx) { return ctx ? ctx->last_error.c_str() : ""; }

void ts_context_set_jobs(ts_context* ctx, unsigned jobs) {
  if (ctx) ctx->jobs = jobs;
}

ts_status ts_set_log_level(const char* level) {
  return level && textshield::set_log_level(level) ? TS_OK : TS_ERR_USAGE;
}

void ts_free_string(char* s) { std::free(s); }

ts_status ts_levenshtein(const char* a, const char* b, size_t* out) {
  return guarded(nullptr, [&] {
    require(a && b && out, "null argument");
    *out = levenshtein(std::string_view(a), std::string_view(b));
  });
}

ts_status ts_normed_levenshtein(const char* a, const char* b, double* out) {
  return guarded(nullptr, [&] {
    require(a && b && out, "null argument");
    *out = normed_levenshtein(std::string_view(a), std::string_view(b));
  });
}

ts_status ts_tokenize(ts_context* ctx, const char* text, char** out_json) {
  return guarded(ctx, [&] {
    require(text && out_json, "null argument");
    *out_json = duplicate(Json(tokenize(text).tokens).dump(-1, ' ', false, Json::error_handler_t::replace));
  });
}

ts_status ts_bleu(ts_context* ctx, const char* hyp, const char* ref, int max_n, double* out) {
  return guarded(ctx, [&] {
    require(hyp && ref && out, "null argument");
    try {
      *out = bleu(tokenize(hyp), tokenize(ref), max_n);
    } catch (const EmptyInput& e) {
      throw UsageError(e.what());
    }
  });
}

ts_status ts_rouge_l(ts_context* ctx, const char* hyp, const char* ref, double* out) {
  return guarded(ctx, [&] {
    require(hyp && ref && out, "null argument");
    *out = rouge_l(tokenize(hyp), tokenize(ref));
  });
}

ts_status ts_cosine_sim(const char* hyp, const char* ref, double* out) {
  return guarded(nullptr, [&] {
    require(hyp && ref && out, "null argument");
    *out = cosine_sim(tokenize(hyp), tokenize(ref));
  });
}

ts_status ts_iou(ts_context* ctx, const double a[4], const double b[4], double* out) {
  return guarded(ctx, [&] {
    require(out != nullptr, "null argument");
    *out = iou(box_arg(a), box_arg(b));
  });
}

ts_status ts_diou(ts_context* ctx, const double a[4], const double b[4], double* out) {
  return guarded(ctx, [&] {
    require(out != nullptr, "null argument");
    *out = diou(box_arg(a), box_arg(b));
  });
}

ts_status ts_mask_encode_file(ts_context* ctx, const char* path, char** out_mask_string) {
  return guarded(ctx, [&] {
    require(path && out_mask_string, "null argument");
    *out_mask_string = duplicate(run_mask_encode(path));
  });
}

ts_status ts_mask_decode_to_file(ts_context* ctx, const char* mask_string, const char* path) {
  return guarded(ctx, [&] {
    require(mask_string && path, "null argument");
    run_mask_decode(mask_string, path);
  });
}

ts_status ts_mask_min_bbox(ts_context* ctx, const char* mask_string, double out[4]) {
  return guarded(ctx, [&] {
    require(mask_string && out, "null argument");
    copy_box(min_bbox(decode_mask_string(mask_string)), out);
  });
}

ts_status ts_parse_completion(ts_context* ctx, const char* raw, char** out_json) {
  return guarded(ctx, [&] {
    require(raw && out_json, "null argument");
    *out_json = duplicate(to_json(parse_completion(raw)).dump(-1, ' ', false, Json::error_handler_t::replace));
  });
}

ts_status ts_render_completion(ts_context* ctx, const char* prediction_json, char** out) {
  return guarded(ctx, [&] {
    require(out != nullptr, "null argument");
    const auto pred = unwrap(validate_prediction(parse_json_arg(prediction_json, "prediction")),
                             "invalid prediction");
    *out = duplicate(render_completion(pred));
  });
}

ts_reward_weights ts_default_weights(void) {
  const RewardWeights w;
  return ts_reward_weights{w.cls, w.method, w.loc, w.ocr, w.format};
}

ts_status ts_reward_all(ts_context* ctx, const char* prediction_json, const char* groundtruth_json,
                        const ts_reward_weights* weights, ts_reward_vector* out) {
  return guarded(ctx, [&] {
    require(out != nullptr, "null argument");
    RewardWeights w;
    if (weights) {
      for (double v : {weights->cls, weights->method, weights->loc, weights->ocr, weights->format}) {
        require(v >= 0, "weights must be non-negative");
      }
      w = RewardWeights{weights->cls, weights->method, weights->loc, weights->ocr, weights->format};
    }
    const ScoredCompletion completion = completion_arg(prediction_json);
    const auto gt = unwrap(validate_groundtruth(parse_json_arg(groundtruth_json, "ground truth")),
                           "invalid ground truth");
    const RewardVector r = reward_all(completion, gt, w);
    *out = ts_reward_vector{r.cls,      r.method.value_or(0.0), r.loc.value_or(0.0), r.ocr.value_or(0.0),
                            r.format,   r.composite,            r.method.has_value(), r.loc.has_value(),
                            r.ocr.has_value()};
  });
}

ts_status ts_group_advantages(ts_context* ctx, const double* rewards, size_t n, double* out) {
  return guarded(ctx, [&] {
    require((rewards && out) || n == 0, "null argument");
    try {
      const auto a = group_advantages(std::span<const double>(rewards, n));
      std::copy(a.begin(), a.end(), out);
    } catch (const GroupTooSmall& e) {
      throw UsageError(e.what());
    }
  });
}

ts_status ts_rectify(ts_context* ctx, const char* prediction_json, const char* layout_json, double threshold,
                     ts_rectify_outcome* out) {
  return guarded(ctx, [&] {
    require(out != nullptr, "null argument");
    require(threshold >= 0.0 && threshold <= 1.0, "threshold must lie in [0, 1]");
    const auto pred = unwrap(validate_prediction(parse_json_arg(prediction_json, "prediction")),
                             "invalid prediction");
    const auto layout = unwrap(validate_ocr(parse_json_arg(layout_json, "layout")), "invalid layout");
    const RectifyOutcome o = rectify(pred, layout, RectifyConfig{threshold});
    copy_box(o.final_bbox, out->final_bbox);
    out->source = o.source == RectifySource::OcrUnique ? TS_RECTIFY_OCR_UNIQUE
                  : o.source == RectifySource::OcrDiou ? TS_RECTIFY_OCR_DIOU
                                                        : TS_RECTIFY_KEPT_ORIGINAL;
    out->has_match = o.matched_index.has_value();
    out->matched_index = o.matched_index.value_or(0);
    out->match_distance = o.match_distance.value_or(0.0);
  });
}

ts_status ts_run_parse(ts_context* ctx, const char* input, const char* output, const char* diagnostics) {
  return guarded(ctx, [&] {
    require(input && output, "parse needs input and output paths");
    ParseJob job;
    job.input = input;
    job.output = output;
    job.diagnostics = diagnostics ? fs::path(diagnostics) : fs::path(std::string(output) + ".diagnostics.jsonl");
    job.jobs = ctx ? ctx->jobs : 0;
    run_parse(job);
  });
}

ts_status ts_run_reward(ts_context* ctx, const ts_reward_options* opts) {
  return guarded(ctx, [&] {
    require(opts && opts->predictions && opts->groundtruth && opts->output,
            "reward needs predictions, ground truth and output paths");
    RewardJob job;
    job.predictions = opts->predictions;
    job.groundtruth = opts->groundtruth;
    job.output = opts->output;
    if (opts->weights) {
      try {
        job.weights = RewardWeights::parse(opts->weights);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
    }
    if (opts->group_size) job.group_size = opts->group_size;
    job.jobs = ctx ? ctx->jobs : 0;
    run_reward(job);
  });
}

ts_status ts_run_rectify(ts_context* ctx, const ts_rectify_options* opts) {
  return guarded(ctx, [&] {
    require(opts && opts->predictions && opts->ocr && opts->output,
            "rectify needs predictions, OCR and output paths");
    RectifyJob job;
    job.predictions = opts->predictions;
    job.ocr = opts->ocr;
    job.output = opts->output;
    if (opts->audit) job.audit = fs::path(opts->audit);
    job.config.match_threshold = opts->threshold;
    job.jobs = ctx ? ctx->jobs : 0;
    run_rectify(job);
  });
}

ts_status ts_run_evaluate(ts_context* ctx, const ts_evaluate_options* opts, char** out_report) {
  return guarded(ctx, [&] {
    require(opts && opts->predictions && opts->groundtruth, "evaluate needs predictions and ground truth");
    EvaluateJob job;
    job.predictions = opts->predictions;
    job.groundtruth = opts->groundtruth;
    if (opts->output) job.output = fs::path(opts->output);
    try {
      job.format = parse_report_format(opts->format ? opts->format : "md");
      job.denominator = parse_denominator(opts->denominator ? opts->denominator : "tampered");
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    if (opts->label) job.label = opts->label;
    job.rectified = opts->rectified != 0;
    if (opts->max_unmatched >= 0) job.max_unmatched = static_cast<std::size_t>(opts->max_unmatched);
    job.jobs = ctx ? ctx->jobs : 0;
    const std::string report = run_evaluate(job);
    if (out_report) *out_report = duplicate(report);
  });
}

ts_fixture_options ts_default_fixture_options(void) {
  const FixtureParams p;
  return ts_fixture_options{p.seed,           p.n,           p.text_noise,  p.target_iou,
                            p.iou_spread,     p.reasoning_noise, p.verdict_error, p.duplicate_rate,
                            p.distractors,    p.real_fraction,   p.generated_fraction};
}

ts_status ts_run_fixtures(ts_context* ctx, const ts_fixture_options* opts, const char* out_dir) {
  return guarded(ctx, [&] {
    require(opts && out_dir, "fixtures need options and an output directory");
    require(opts->n >= 1, "fixture count must be at least 1");
    for (double rate : {opts->text_noise, opts->reasoning_noise, opts->verdict_error, opts->duplicate_rate,
                        opts->real_fraction, opts->generated_fraction}) {
      require(rate >= 0.0 && rate <= 1.0, "fixture rates must lie in [0, 1]");
    }
    require(opts->real_fraction + opts->generated_fraction <= 1.0, "real + generated fractions exceed 1");
    require(opts->target_iou > 0.0 && opts->target_iou <= 1.0, "target IoU must lie in (0, 1]");
    FixtureParams p;
    p.seed = opts->seed;
    p.n = opts->n;
    p.text_noise = opts->text_noise;
    p.target_iou = opts->target_iou;
    p.iou_spread = opts->iou_spread;
    p.reasoning_noise = opts->reasoning_noise;
    p.verdict_error = opts->verdict_error;
    p.duplicate_rate = opts->duplicate_rate;
    p.distractors = opts->distractors;
    p.real_fraction = opts->real_fraction;
    p.generated_fraction = opts->generated_fraction;
    run_fixtures(p, out_dir);
  });
}

}  // extern "C"
