/*
 * textshield.h - C interface to the textshield core library.
 *
 * Every call that can fail returns a ts_status. Calls that take a context
 * record a human readable message retrievable with ts_last_error(). Strings
 * returned through `char **` out-parameters are heap allocated by the
 * library and must be released with ts_free_string().
 *
 * Records cross the boundary as UTF-8 JSON objects using the same schemas
 * as the JSONL files.
 */
#ifndef TEXTSHIELD_H
#define TEXTSHIELD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define TS_API __declspec(dllexport)
#else
#  define TS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ts_status {
  TS_OK = 0,
  TS_ERR_USAGE = 1,    /* invalid argument or option */
  TS_ERR_SCHEMA = 2,   /* input violates a record schema */
  TS_ERR_DATA = 3,     /* records inconsistent with each other */
  TS_ERR_IO = 4,       /* file missing, unreadable or unwritable */
  TS_ERR_INTERNAL = 5
} ts_status;

typedef struct ts_context ts_context;

TS_API const char *ts_version(void);
TS_API const char *ts_status_name(ts_status status);

TS_API ts_status ts_context_create(ts_context **out);
TS_API void ts_context_destroy(ts_context *ctx);
/* Message of the last failed call on this context, "" if none. */
TS_API const char *ts_last_error(const ts_context *ctx);
/* 0 selects the available hardware parallelism. */
TS_API void ts_context_set_jobs(ts_context *ctx, unsigned jobs);
/* One of trace, debug, info, warn, error, off. */
TS_API ts_status ts_set_log_level(const char *level);

TS_API void ts_free_string(char *s);

/* ---- text metrics ------------------------------------------------------ */

TS_API ts_status ts_levenshtein(const char *a, const char *b, size_t *out);
TS_API ts_status ts_normed_levenshtein(const char *a, const char *b, double *out);
/* JSON array of tokens. */
TS_API ts_status ts_tokenize(ts_context *ctx, const char *text, char **out_json);
TS_API ts_status ts_bleu(ts_context *ctx, const char *hyp, const char *ref, int max_n, double *out);
TS_API ts_status ts_rouge_l(ts_context *ctx, const char *hyp, const char *ref, double *out);
TS_API ts_status ts_cosine_sim(const char *hyp, const char *ref, double *out);

/* ---- geometry: boxes are {x1, y1, x2, y2} ------------------------------ */

TS_API ts_status ts_iou(ts_context *ctx, const double a[4], const double b[4], double *out);
TS_API ts_status ts_diou(ts_context *ctx, const double a[4], const double b[4], double *out);

/* ---- masks ------------------------------------------------------------- */

TS_API ts_status ts_mask_encode_file(ts_context *ctx, const char *path, char **out_mask_string);
TS_API ts_status ts_mask_decode_to_file(ts_context *ctx, const char *mask_string, const char *path);
/* Minimum box of the tampered cells of a mask string, x2/y2 exclusive. */
TS_API ts_status ts_mask_min_bbox(ts_context *ctx, const char *mask_string, double out[4]);

/* ---- output parsing ---------------------------------------------------- */

/* ParsedOutput as JSON: think, answer_raw, answer, tags_ok, payload_ok,
 * format_ok, diagnostics. Never fails on malformed completions. */
TS_API ts_status ts_parse_completion(ts_context *ctx, const char *raw, char **out_json);
TS_API ts_status ts_render_completion(ts_context *ctx, const char *prediction_json, char **out);

/* ---- rewards ----------------------------------------------------------- */

typedef struct ts_reward_weights {
  double cls;
  double method;
  double loc;
  double ocr;
  double format;
} ts_reward_weights;

typedef struct ts_reward_vector {
  double cls;
  double method; /* valid when has_method */
  double loc;    /* valid when has_loc */
  double ocr;    /* valid when has_ocr */
  double format;
  double composite;
  int has_method;
  int has_loc;
  int has_ocr;
} ts_reward_vector;

TS_API ts_reward_weights ts_default_weights(void);

/* `prediction_json` is a typed prediction or a raw completion {id, raw}.
 * `weights` may be NULL for the defaults. */
TS_API ts_status ts_reward_all(ts_context *ctx, const char *prediction_json, const char *groundtruth_json,
                               const ts_reward_weights *weights, ts_reward_vector *out);

TS_API ts_status ts_group_advantages(ts_context *ctx, const double *rewards, size_t n, double *out);

/* ---- OCR rectification ------------------------------------------------- */

typedef enum ts_rectify_source {
  TS_RECTIFY_OCR_UNIQUE = 0,
  TS_RECTIFY_OCR_DIOU = 1,
  TS_RECTIFY_KEPT_ORIGINAL = 2
} ts_rectify_source;

typedef struct ts_rectify_outcome {
  double final_bbox[4];
  ts_rectify_source source;
  int has_match;
  size_t matched_index;
  double match_distance;
} ts_rectify_outcome;

TS_API ts_status ts_rectify(ts_context *ctx, const char *prediction_json, const char *layout_json,
                            double threshold, ts_rectify_outcome *out);

/* ---- file pipelines ---------------------------------------------------- */

TS_API ts_status ts_run_parse(ts_context *ctx, const char *input, const char *output, const char *diagnostics);

typedef struct ts_reward_options {
  const char *predictions;
  const char *groundtruth;
  const char *output;
  const char *weights; /* "cls=1,method=1,..." or NULL */
  size_t group_size;   /* 0 disables advantages */
} ts_reward_options;

TS_API ts_status ts_run_reward(ts_context *ctx, const ts_reward_options *opts);

typedef struct ts_rectify_options {
  const char *predictions;
  const char *ocr;
  const char *output;
  const char *audit; /* may be NULL */
  double threshold;
} ts_rectify_options;

TS_API ts_status ts_run_rectify(ts_context *ctx, const ts_rectify_options *opts);

typedef struct ts_evaluate_options {
  const char *predictions;
  const char *groundtruth;
  const char *output;      /* NULL: report only returned */
  const char *format;      /* json, csv, md/markdown */
  const char *denominator; /* tampered or all; NULL for tampered */
  const char *label;       /* NULL for "run" */
  int rectified;
  int64_t max_unmatched;   /* negative: unlimited */
} ts_evaluate_options;

TS_API ts_status ts_run_evaluate(ts_context *ctx, const ts_evaluate_options *opts, char **out_report);

typedef struct ts_fixture_options {
  uint64_t seed;
  size_t n;
  double text_noise;
  double target_iou;
  double iou_spread;
  double reasoning_noise;
  double verdict_error;
  double duplicate_rate;
  size_t distractors;
  double real_fraction;
  double generated_fraction;
} ts_fixture_options;

TS_API ts_fixture_options ts_default_fixture_options(void);
TS_API ts_status ts_run_fixtures(ts_context *ctx, const ts_fixture_options *opts, const char *out_dir);

#ifdef __cplusplus
}
#endif

#endif /* TEXTSHIELD_H */
