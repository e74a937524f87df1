#include "textshield/ocr_rectify.hpp"

#include "textshield/geometry.hpp"
#include "textshield/parallel.hpp"
#include "textshield/schema.hpp"
#include "textshield/text_metrics.hpp"

namespace textshield {

std::string_view to_string(RectifySource s) {
  switch (s) {
    case RectifySource::OcrUnique: return "ocr_unique";
    case RectifySource::OcrDiou: return "ocr_diou";
    case RectifySource::KeptOriginal: return "kept_original";
  }
  return "kept_original";
}

RectifyOutcome rectify(const PredictionRecord& pred, const OcrLayout& layout, const RectifyConfig& cfg) {
  if (pred.verdict != Verdict::Tampered || !pred.text || !pred.bbox) {
    throw NotTampered("prediction '" + pred.id + "' has no tampered text and box to rectify");
  }
  if (pred.id != layout.id) throw IdMismatch("prediction '" + pred.id + "' paired with layout '" + layout.id + "'");
  if (!(cfg.match_threshold >= 0.0 && cfg.match_threshold <= 1.0)) {
    throw Error("match threshold must lie in [0, 1]");
  }

  const std::u32string target = decode_utf8(*pred.text);
  std::vector<std::size_t> matched;
  double best = 0.0;
  for (std::size_t i = 0; i < layout.instances.size(); ++i) {
    const std::u32string text = decode_utf8(layout.instances[i].text);
    const double d = normed_levenshtein(std::u32string_view(text), std::u32string_view(target));
    if (d > cfg.match_threshold) continue;
    if (matched.empty() || d < best) {
      matched.assign(1, i);
      best = d;
    } else if (d == best) {
      matched.push_back(i);
    }
  }

  RectifyOutcome out;
  if (matched.empty()) {
    out.final_bbox = *pred.bbox;
    out.source = RectifySource::KeptOriginal;
    return out;
  }
  std::size_t winner = matched.front();
  if (matched.size() == 1) {
    out.source = RectifySource::OcrUnique;
  } else {
    out.source = RectifySource::OcrDiou;
    // Strict '>' keeps the lowest index on equal DIoU.
    double best_diou = diou(layout.instances[winner].bbox, *pred.bbox);
    for (std::size_t k = 1; k < matched.size(); ++k) {
      const double v = diou(layout.instances[matched[k]].bbox, *pred.bbox);
      if (v > best_diou) {
        best_diou = v;
        winner = matched[k];
      }
    }
  }
  out.final_bbox = layout.instances[winner].bbox;
  out.matched_index = winner;
  out.match_distance = best;
  return out;
}

std::vector<RectifiedRecord> rectify_batch(std::span<const PredictionRecord> preds,
                                           const std::unordered_map<std::string, OcrLayout>& layouts,
                                           const RectifyConfig& cfg, unsigned jobs) {
  std::vector<RectifiedRecord> out(preds.size());
  parallel_for(preds.size(), jobs, [&](std::size_t i) {
    const PredictionRecord& p = preds[i];
    RectifiedRecord& r = out[i];
    r.record = p;
    if (p.verdict != Verdict::Tampered || !p.text || !p.bbox) return;
    auto it = layouts.find(p.id);
    if (it == layouts.end()) {
      r.outcome = RectifyOutcome{*p.bbox, RectifySource::KeptOriginal, std::nullopt, std::nullopt};
      r.warnings.push_back("no OCR layout for '" + p.id + "', box kept");
      return;
    }
    r.outcome = rectify(p, it->second, cfg);
    r.record.bbox = r.outcome->final_bbox;
  });
  return out;
}

Json to_json(const RectifyOutcome& o) {
  return Json{{"final_bbox", to_json(o.final_bbox)},
              {"source", to_string(o.source)},
              {"matched_index", o.matched_index ? Json(*o.matched_index) : Json(nullptr)},
              {"match_distance", o.match_distance ? Json(*o.match_distance) : Json(nullptr)}};
}

}  // namespace textshield
