#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "textshield/eval_harness.hpp"
#include "textshield/fixtures.hpp"
#include "textshield/ocr_rectify.hpp"
#include "textshield/rewards.hpp"

// File-to-file stages behind the CLI. Inputs are fully validated before any
// output is written; outputs land atomically.

namespace textshield {

namespace fs = std::filesystem;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct ParseJob {
  fs::path input;
  fs::path output;
  fs::path diagnostics;
  unsigned jobs = 0;
};

struct ParseSummary {
  std::size_t lines = 0;
  std::size_t emitted = 0;
  std::size_t format_ok = 0;
};

/// raw_outputs.jsonl ({id, raw}) to predictions.jsonl plus a per-line
/// diagnostics sidecar. Completions whose payload cannot form a valid
/// prediction are reported in the sidecar only.
ParseSummary run_parse(const ParseJob& job);

struct RewardJob {
  fs::path predictions;
  fs::path groundtruth;
  fs::path output;
  RewardWeights weights;
  std::optional<std::size_t> group_size;
  unsigned jobs = 0;
};

/// Prediction lines may be typed records or raw completions ({id, raw}).
/// Throws DataError for unknown ids or a line count not divisible by the
/// group size.
std::size_t run_reward(const RewardJob& job);

struct RectifyJob {
  fs::path predictions;
  fs::path ocr;
  fs::path output;
  std::optional<fs::path> audit;
  RectifyConfig config;
  unsigned jobs = 0;
};

struct RectifySummary {
  std::size_t records = 0;
  std::size_t replaced = 0;
  std::size_t warnings = 0;
};

RectifySummary run_rectify(const RectifyJob& job);

struct EvaluateJob {
  fs::path predictions;
  fs::path groundtruth;
  std::optional<fs::path> output;
  ReportFormat format = ReportFormat::Markdown;
  Denominator denominator = Denominator::Tampered;
  std::string label = "run";
  bool rectified = false;
  std::optional<std::size_t> max_unmatched;
  unsigned jobs = 0;
};

/// Returns the rendered report (also written to `output` when set). Throws
/// DataError when unmatched prediction ids exceed the budget.
std::string run_evaluate(const EvaluateJob& job);

void run_fixtures(const FixtureParams& params, const fs::path& out_dir);

/// PGM file, or a text file holding a mask string, to the 1024-char string.
std::string run_mask_encode(const fs::path& input);
/// Mask string to a 32x32 binary PGM.
void run_mask_decode(std::string_view mask_string, const fs::path& output);

/// Throws IoError naming the first path that is not a readable file.
void require_input(const fs::path& p);
/// Throws IoError when the parent directory of `p` does not exist.
void require_output(const fs::path& p);

}  // namespace textshield
