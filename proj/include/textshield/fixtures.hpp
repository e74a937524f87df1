#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "textshield/types.hpp"

namespace textshield {

/// Knobs for the synthetic (ground truth, OCR layout, prediction) corpus.
struct FixtureParams {
  std::uint64_t seed = 7;
  std::size_t n = 1000;
  /// Fraction of characters substituted in predicted tampered text,
  /// applied as floor(rate * length) substitutions.
  double text_noise = 0.0;
  /// Mean IoU of predicted vs. true box; 1 disables jitter.
  double target_iou = 1.0;
  /// Per-image IoU targets are spread uniformly over target +- spread.
  double iou_spread = 0.1;
  /// Fraction of reasoning words replaced in predictions.
  double reasoning_noise = 0.0;
  /// Probability that the predicted verdict is wrong.
  double verdict_error = 0.0;
  /// Probability that the tampered text appears a second time in the layout.
  double duplicate_rate = 0.1;
  std::size_t distractors = 4;
  double real_fraction = 0.2;
  double generated_fraction = 0.1;
};

struct FixtureSet {
  std::vector<GroundTruthRecord> groundtruth;
  std::vector<OcrLayout> layouts;
  std::vector<PredictionRecord> predictions;
};

/// Deterministic for a given seed: the generator draws only raw 64-bit
/// words, no library distributions.
FixtureSet generate_fixtures(const FixtureParams& params);

/// groundtruth.jsonl, ocr.jsonl and predictions.jsonl under `dir`.
void write_fixtures(const FixtureSet& set, const std::filesystem::path& dir);

}  // namespace textshield
