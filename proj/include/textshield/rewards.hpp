#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "textshield/output_parser.hpp"
#include "textshield/types.hpp"

namespace textshield {

class GroupTooSmall : public Error {
 public:
  GroupTooSmall() : Error("advantage groups need at least two rewards") {}
};

/// Per-component weights for the composite score. Must be non-negative.
struct RewardWeights {
  double cls = 1.0;
  double method = 1.0;
  double loc = 1.0;
  double ocr = 1.0;
  double format = 1.0;

  /// Parses `cls=1,method=0.5,...`; unspecified keys keep their defaults.
  /// Throws Error on unknown keys, bad numbers or negative weights.
  static RewardWeights parse(std::string_view spec);
};

/// Scores for one completion. method/loc/ocr are empty when the ground truth
/// is not tampered and are then left out of the composite.
struct RewardVector {
  double cls = 0;
  std::optional<double> method;
  std::optional<double> loc;
  std::optional<double> ocr;
  double format = 0;
  double composite = 0;

  friend bool operator==(const RewardVector&, const RewardVector&) = default;
};

double reward_cls(Verdict pred, Verdict gt);
std::optional<double> reward_method(std::optional<ForgeryMethod> pred, std::optional<ForgeryMethod> gt,
                                    Verdict gt_verdict);
/// IoU when it strictly exceeds 0.5, else 0.
std::optional<double> reward_loc(const std::optional<BBox>& pred, const std::optional<BBox>& gt,
                                 Verdict gt_verdict);
/// 1 - normed Levenshtein; missing prediction scores 0.
std::optional<double> reward_ocr(const std::optional<std::string>& pred, const std::optional<std::string>& gt,
                                 Verdict gt_verdict);
double reward_format(const ParsedOutput& parsed);

/// Answer-side inputs: the extracted payload plus the format signal.
struct ScoredCompletion {
  std::string id;
  AnswerPayload answer;
  bool format_ok = false;
};

/// From a raw completion.
ScoredCompletion completion_from_parse(std::string id, const ParsedOutput& parsed);
/// From a typed prediction. Uses raw_output for the format signal when
/// present; otherwise the record stands for its canonical rendering.
ScoredCompletion completion_from_record(const PredictionRecord& pred);

/// Throws IdMismatch when the ids differ.
RewardVector reward_all(const ScoredCompletion& pred, const GroundTruthRecord& gt,
                        const RewardWeights& weights = {});
RewardVector reward_all(const PredictionRecord& pred, const ParsedOutput& parsed, const GroundTruthRecord& gt,
                        const RewardWeights& weights = {});

inline constexpr double kAdvantageStdFloor = 1e-8;

/// (r - mean) / population std; all zeros when std < 1e-8.
std::vector<double> group_advantages(std::span<const double> rewards);

Json to_json(const RewardVector& r);

}  // namespace textshield
