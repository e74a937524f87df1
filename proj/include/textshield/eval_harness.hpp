#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "textshield/text_metrics.hpp"
#include "textshield/types.hpp"

namespace textshield {

class UnknownFormat : public Error {
 public:
  using Error::Error;
};

/// Region records share an image: "img7#0", "img7#1" both belong to "img7".
inline constexpr char kRegionSeparator = '#';
std::string_view image_id(std::string_view record_id);

/// Mean of cosine, Rouge-L and BLEU. Empty texts score 0 on BLEU/Rouge-L.
double reasoning_score(std::string_view hyp, std::string_view ref,
                       const SimilarityProvider& similarity = TermFrequencyCosine{});

/// Per-image tuple; ocr/loc are empty unless the ground truth is tampered.
struct ImageScore {
  double cls = 0;
  std::optional<double> ocr;
  std::optional<double> loc;
  double res = 0;

  friend bool operator==(const ImageScore&, const ImageScore&) = default;
};

/// A missing prediction scores 0 everywhere. Throws IdMismatch.
ImageScore score_image(const PredictionRecord* pred, const GroundTruthRecord& gt,
                       const SimilarityProvider& similarity = TermFrequencyCosine{});

struct RegionAssignment {
  /// (pred index, gt index) in match order.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> unmatched_preds;
  std::vector<std::size_t> unmatched_gts;
};

/// Greedy 1:1 assignment by descending IoU; ties go to the lower gt index,
/// then the lower pred index. Regions without a box never match.
RegionAssignment match_multi_region(std::span<const PredictionRecord> preds,
                                    std::span<const GroundTruthRecord> gts);

/// Scored image with everything aggregate() needs.
struct ImageEvaluation {
  std::string image_id;
  Subset subset = Subset::Test;
  Verdict gt_verdict = Verdict::Real;
  std::size_t gt_records = 1;
  bool prediction_missing = false;
  double cls = 0;
  double res = 0;
  /// One entry per tampered ground-truth region.
  std::vector<double> ocr;
  std::vector<double> loc;
  std::size_t false_positive_regions = 0;
};

ImageEvaluation evaluate_image(std::span<const PredictionRecord> preds, std::span<const GroundTruthRecord> gts,
                               const SimilarityProvider& similarity = TermFrequencyCosine{});

enum class Denominator { Tampered, All };
Denominator parse_denominator(std::string_view s);
std::string_view to_string(Denominator d);

struct SubsetMetrics {
  double cls_acc = 0;
  /// Empty when the subset has nothing to average over.
  std::optional<double> ocr_score;
  std::optional<double> loc_iou;
  double res_score = 0;
  std::size_t n_images = 0;
  std::size_t n_real = 0;
  std::size_t n_generated = 0;
  std::size_t n_tampered = 0;
  std::size_t n_missing_predictions = 0;
  std::size_t n_false_positive_regions = 0;
};

struct MetricReport {
  std::string label = "run";
  Denominator denominator = Denominator::Tampered;
  /// Only subsets that occur in the ground truth.
  std::map<Subset, SubsetMetrics> subsets;
  std::vector<std::string> unmatched_prediction_ids;
  std::vector<std::string> warnings;
};

/// Percentages of per-subset means. Independent of input order.
MetricReport aggregate(std::span<const ImageEvaluation> images, Denominator denominator = Denominator::Tampered);

struct EvalOptions {
  Denominator denominator = Denominator::Tampered;
  unsigned jobs = 1;
  std::string label = "run";
  const SimilarityProvider* similarity = nullptr;
};

/// Groups records by image, scores every image and aggregates. Throws
/// DataError on duplicate ids or conflicting region verdicts.
MetricReport evaluate(std::span<const PredictionRecord> preds, std::span<const GroundTruthRecord> gts,
                      const EvalOptions& options = {});

enum class ReportFormat { Json, Csv, Markdown };
ReportFormat parse_report_format(std::string_view s);

/// One decimal, as in the published tables.
double round_percent(double v);

std::string emit_report(const MetricReport& report, ReportFormat format);
/// Markdown table with one row per report.
std::string emit_markdown(std::span<const MetricReport> reports);

}  // namespace textshield
