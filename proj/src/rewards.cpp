#include "textshield/rewards.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include "textshield/geometry.hpp"
#include "textshield/text_metrics.hpp"

namespace textshield {

RewardWeights RewardWeights::parse(std::string_view spec) {
  RewardWeights w;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', start), spec.size());
    const std::string_view item = spec.substr(start, comma - start);
    start = comma + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw Error("weight '" + std::string(item) + "' is not key=value");
    const std::string_view key = item.substr(0, eq);
    const std::string_view num = item.substr(eq + 1);
    double value = 0;
    const auto [end, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec != std::errc() || end != num.data() + num.size() || !std::isfinite(value)) {
      throw Error("weight '" + std::string(key) + "' has a bad value '" + std::string(num) + "'");
    }
    if (value < 0) throw Error("weight '" + std::string(key) + "' must be non-negative");
    if (key == "cls") {
      w.cls = value;
    } else if (key == "method") {
      w.method = value;
    } else if (key == "loc") {
      w.loc = value;
    } else if (key == "ocr") {
      w.ocr = value;
    } else if (key == "format") {
      w.format = value;
    } else {
      throw Error("unknown weight '" + std::string(key) + "' (expected cls, method, loc, ocr, format)");
    }
  }
  return w;
}

double reward_cls(Verdict pred, Verdict gt) { return pred == gt ? 1.0 : 0.0; }

std::optional<double> reward_method(std::optional<ForgeryMethod> pred, std::optional<ForgeryMethod> gt,
                                    Verdict gt_verdict) {
  if (gt_verdict != Verdict::Tampered) return std::nullopt;
  return pred && gt && *pred == *gt ? 1.0 : 0.0;
}

std::optional<double> reward_loc(const std::optional<BBox>& pred, const std::optional<BBox>& gt,
                                 Verdict gt_verdict) {
  if (gt_verdict != Verdict::Tampered) return std::nullopt;
  if (!pred || !gt) return 0.0;
  const double v = iou(*pred, *gt);
  return v > 0.5 ? v : 0.0;
}

std::optional<double> reward_ocr(const std::optional<std::string>& pred, const std::optional<std::string>& gt,
                                 Verdict gt_verdict) {
  if (gt_verdict != Verdict::Tampered) return std::nullopt;
  if (!pred || !gt) return 0.0;
  return 1.0 - normed_levenshtein(*pred, *gt);
}

double reward_format(const ParsedOutput& parsed) { return parsed.tags_ok && parsed.payload_ok ? 1.0 : 0.0; }

ScoredCompletion completion_from_parse(std::string id, const ParsedOutput& parsed) {
  return ScoredCompletion{std::move(id), parsed.answer, parsed.tags_ok && parsed.payload_ok};
}

ScoredCompletion completion_from_record(const PredictionRecord& pred) {
  ScoredCompletion c;
  c.id = pred.id;
  c.answer = AnswerPayload{pred.verdict, pred.method, pred.text, pred.bbox};
  c.format_ok = pred.raw_output ? reward_format(parse_completion(*pred.raw_output)) == 1.0 : true;
  return c;
}

RewardVector reward_all(const ScoredCompletion& pred, const GroundTruthRecord& gt, const RewardWeights& weights) {
  if (pred.id != gt.id) throw IdMismatch("prediction '" + pred.id + "' scored against ground truth '" + gt.id + "'");
  const AnswerPayload& a = pred.answer;
  // The region fields only count when the model actually flags tampering.
  const bool flagged = a.verdict == Verdict::Tampered;
  RewardVector r;
  r.cls = a.verdict ? reward_cls(*a.verdict, gt.verdict) : 0.0;
  r.method = reward_method(flagged ? a.method : std::nullopt, gt.method, gt.verdict);
  r.loc = reward_loc(flagged ? a.bbox : std::nullopt, gt.bbox, gt.verdict);
  r.ocr = reward_ocr(flagged ? a.text : std::nullopt, gt.text, gt.verdict);
  r.format = pred.format_ok ? 1.0 : 0.0;

  double composite = weights.cls * r.cls;
  if (r.method) composite += weights.method * *r.method;
  if (r.loc) composite += weights.loc * *r.loc;
  if (r.ocr) composite += weights.ocr * *r.ocr;
  composite += weights.format * r.format;
  r.composite = composite;
  return r;
}

RewardVector reward_all(const PredictionRecord& pred, const ParsedOutput& parsed, const GroundTruthRecord& gt,
                        const RewardWeights& weights) {
  ScoredCompletion c;
  c.id = pred.id;
  c.answer = AnswerPayload{pred.verdict, pred.method, pred.text, pred.bbox};
  c.format_ok = reward_format(parsed) == 1.0;
  return reward_all(c, gt, weights);
}

std::vector<double> group_advantages(std::span<const double> rewards) {
  if (rewards.size() < 2) throw GroupTooSmall();
  const double n = static_cast<double>(rewards.size());
  const double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
  double sq = 0.0;
  for (double r : rewards) sq += (r - mean) * (r - mean);
  const double stddev = std::sqrt(sq / n);
  std::vector<double> out(rewards.size(), 0.0);
  if (stddev < kAdvantageStdFloor) return out;
  for (std::size_t i = 0; i < rewards.size(); ++i) out[i] = (rewards[i] - mean) / stddev;
  return out;
}

Json to_json(const RewardVector& r) {
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  return Json{{"cls", r.cls},       {"method", opt(r.method)}, {"loc", opt(r.loc)},
              {"ocr", opt(r.ocr)},  {"format", r.format},      {"composite", r.composite}};
}

}  // namespace textshield
