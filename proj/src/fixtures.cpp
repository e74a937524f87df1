#include "textshield/fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "textshield/geometry.hpp"
#include "textshield/jsonl.hpp"
#include "textshield/output_parser.hpp"
#include "textshield/schema.hpp"
#include "textshield/text_metrics.hpp"

namespace textshield {

namespace {

constexpr std::u32string_view kLatin = U"ABCDEFGHJKLMNPQRSTUVWXYZ0123456789";
constexpr std::u32string_view kHan = U"发票金额总计日期名称数量单价合同编号姓名地址电话银行账户收据税号";

constexpr std::array<const char*, 40> kVocabulary = {
    "the",       "stroke",   "edges",      "around",    "digits",    "appear",     "blurred",  "compared",
    "with",      "nearby",   "text",       "font",      "weight",    "differs",    "slightly", "background",
    "texture",   "shows",    "repeated",   "patterns",  "lighting",  "is",         "uneven",   "near",
    "region",    "spacing",  "between",    "characters", "looks",    "irregular",  "baseline", "shifted",
    "compression", "noise",  "inconsistent", "no",      "visible",   "artifacts",  "natural",  "document"};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

std::u32string random_text(Rng& rng, std::u32string_view alphabet, std::size_t min_len, std::size_t max_len) {
  const std::size_t len = min_len + rng.below(max_len - min_len + 1);
  std::u32string s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng.below(alphabet.size())]);
  return s;
}

std::u32string corrupt(Rng& rng, std::u32string s, std::u32string_view alphabet, double rate) {
  const auto edits = static_cast<std::size_t>(std::floor(rate * static_cast<double>(s.size())));
  std::vector<std::size_t> positions(s.size());
  for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i;
  for (std::size_t k = 0; k < edits && k < positions.size(); ++k) {
    std::swap(positions[k], positions[k + rng.below(positions.size() - k)]);
    const std::size_t at = positions[k];
    char32_t replacement = s[at];
    while (replacement == s[at]) replacement = alphabet[rng.below(alphabet.size())];
    s[at] = replacement;
  }
  return s;
}

std::string sentence(Rng& rng) {
  const std::size_t words = 12 + rng.below(19);
  std::string out;
  for (std::size_t i = 0; i < words; ++i) {
    if (i) out += ' ';
    out += kVocabulary[rng.below(kVocabulary.size())];
  }
  return out;
}

std::string perturb_sentence(Rng& rng, const std::string& s, double rate) {
  if (rate <= 0) return s;
  std::vector<std::string> words;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t sp = std::min(s.find(' ', start), s.size());
    words.push_back(s.substr(start, sp - start));
    start = sp + 1;
  }
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += rng.chance(rate) ? kVocabulary[rng.below(kVocabulary.size())] : words[i];
  }
  return out;
}

BBox random_box(Rng& rng, double lo, double hi) {
  const double x1 = std::floor(rng.uniform(lo, hi));
  const double y1 = std::floor(rng.uniform(lo, hi));
  const double w = std::floor(rng.uniform(40, 200));
  const double h = std::floor(rng.uniform(16, 60));
  return BBox{x1, y1, x1 + w, y1 + h};
}

BBox shifted(const BBox& b, double dx, double dy) { return BBox{b.x1 + dx, b.y1 + dy, b.x2 + dx, b.y2 + dy}; }

// Moves `gt` along a random direction until its IoU with the original hits `target`.
BBox jitter_to_iou(Rng& rng, const BBox& gt, double target) {
  const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double ux = gt.width() * std::cos(theta);
  const double uy = gt.height() * std::sin(theta);
  double lo = 0.0, hi = 2.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (iou(shifted(gt, mid * ux, mid * uy), gt) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double s = 0.5 * (lo + hi);
  return shifted(gt, s * ux, s * uy);
}

Verdict other_verdict(Rng& rng, Verdict v) {
  std::vector<Verdict> options;
  for (Verdict o : {Verdict::Real, Verdict::Generated, Verdict::Tampered}) {
    if (o != v) options.push_back(o);
  }
  return options[rng.below(options.size())];
}

}  // namespace

FixtureSet generate_fixtures(const FixtureParams& params) {
  if (params.n == 0) throw Error("fixture count must be at least 1");
  Rng rng(params.seed);
  FixtureSet set;
  set.groundtruth.reserve(params.n);
  set.layouts.reserve(params.n);
  set.predictions.reserve(params.n);
  for (std::size_t i = 0; i < params.n; ++i) {
    char id_buf[32];
    std::snprintf(id_buf, sizeof id_buf, "img%06zu", i);
    const std::string id = id_buf;

    GroundTruthRecord gt;
    gt.id = id;
    gt.subset = kAllSubsets[rng.below(std::size(kAllSubsets))];
    const bool han = gt.subset == Subset::Cl && rng.chance(0.5);
    gt.language = han ? "zh" : "en";
    gt.domain = "document";
    const std::u32string_view alphabet = han ? kHan : kLatin;
    const double u = rng.uniform();
    gt.verdict = u < params.real_fraction                              ? Verdict::Real
                 : u < params.real_fraction + params.generated_fraction ? Verdict::Generated
                                                                        : Verdict::Tampered;
    gt.reasoning_annotation = sentence(rng);

    OcrLayout layout;
    layout.id = id;
    for (std::size_t k = 0; k < params.distractors; ++k) {
      layout.instances.push_back({encode_utf8(random_text(rng, alphabet, 4, 14)), random_box(rng, 0, 1800)});
    }
    std::u32string gt_text;
    if (gt.verdict == Verdict::Tampered) {
      gt.method = rng.chance(0.5) ? ForgeryMethod::CopyPaste : ForgeryMethod::Generation;
      gt_text = random_text(rng, alphabet, 4, 14);
      gt.text = encode_utf8(gt_text);
      gt.bbox = random_box(rng, 500, 1300);
      layout.instances.push_back({*gt.text, *gt.bbox});
      if (rng.chance(params.duplicate_rate)) layout.instances.push_back({*gt.text, random_box(rng, 0, 300)});
    }
    for (std::size_t k = layout.instances.size(); k > 1; --k) {
      std::swap(layout.instances[k - 1], layout.instances[rng.below(k)]);
    }

    PredictionRecord pred;
    pred.id = id;
    pred.verdict = rng.chance(params.verdict_error) ? other_verdict(rng, gt.verdict) : gt.verdict;
    pred.reasoning = perturb_sentence(rng, gt.reasoning_annotation, params.reasoning_noise);
    if (pred.verdict == Verdict::Tampered) {
      if (gt.verdict == Verdict::Tampered) {
        pred.method = gt.method;
        pred.text = encode_utf8(corrupt(rng, gt_text, alphabet, params.text_noise));
        if (params.target_iou >= 1.0) {
          pred.bbox = gt.bbox;
        } else {
          const double target = std::clamp(
              params.target_iou + params.iou_spread * (2.0 * rng.uniform() - 1.0), 0.02, 0.999);
          pred.bbox = jitter_to_iou(rng, *gt.bbox, target);
        }
      } else {
        pred.method = ForgeryMethod::Generation;
        pred.text = encode_utf8(random_text(rng, alphabet, 4, 14));
        pred.bbox = random_box(rng, 500, 1300);
      }
    }
    pred.raw_output = render_completion(pred);

    set.groundtruth.push_back(std::move(gt));
    set.layouts.push_back(std::move(layout));
    set.predictions.push_back(std::move(pred));
  }
  return set;
}

void write_fixtures(const FixtureSet& set, const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("output directory does not exist: " + dir.string());
  std::vector<Json> gt, ocr, pred;
  for (const auto& r : set.groundtruth) gt.push_back(to_json(r));
  for (const auto& l : set.layouts) ocr.push_back(to_json(l));
  for (const auto& p : set.predictions) pred.push_back(to_json(p));
  write_file_atomic(dir / "groundtruth.jsonl", to_jsonl(gt));
  write_file_atomic(dir / "ocr.jsonl", to_jsonl(ocr));
  write_file_atomic(dir / "predictions.jsonl", to_jsonl(pred));
}

}  // namespace textshield
