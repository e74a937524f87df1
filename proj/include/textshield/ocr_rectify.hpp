#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "textshield/types.hpp"

namespace textshield {

class NotTampered : public Error {
 public:
  using Error::Error;
};

struct RectifyConfig {
  /// Largest normed Levenshtein distance that still counts as a match (inclusive).
  double match_threshold = 0.2;
};

enum class RectifySource { OcrUnique, OcrDiou, KeptOriginal };

std::string_view to_string(RectifySource s);

struct RectifyOutcome {
  BBox final_bbox;
  RectifySource source = RectifySource::KeptOriginal;
  std::optional<std::size_t> matched_index;
  std::optional<double> match_distance;

  friend bool operator==(const RectifyOutcome&, const RectifyOutcome&) = default;
};

/// Replaces the predicted box by the OCR box of the closest-text instance.
/// Candidates are instances within the threshold; among those at minimum
/// distance a single one wins outright, several are ranked by DIoU with the
/// predicted box (ties to the lowest index). No candidate keeps the original.
/// Throws NotTampered or IdMismatch.
RectifyOutcome rectify(const PredictionRecord& pred, const OcrLayout& layout, const RectifyConfig& cfg = {});

struct RectifiedRecord {
  PredictionRecord record;
  /// Empty for records that are not tampered predictions.
  std::optional<RectifyOutcome> outcome;
  std::vector<std::string> warnings;
};

/// Order-preserving. Non-tampered records pass through; tampered records
/// without a layout keep their box with a warning.
std::vector<RectifiedRecord> rectify_batch(std::span<const PredictionRecord> preds,
                                           const std::unordered_map<std::string, OcrLayout>& layouts,
                                           const RectifyConfig& cfg = {}, unsigned jobs = 1);

Json to_json(const RectifyOutcome& o);

}  // namespace textshield
