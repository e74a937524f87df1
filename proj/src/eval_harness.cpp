#include "textshield/eval_harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "textshield/geometry.hpp"
#include "textshield/parallel.hpp"

namespace textshield {

std::string_view image_id(std::string_view record_id) {
  return record_id.substr(0, record_id.find(kRegionSeparator));
}

double reasoning_score(std::string_view hyp, std::string_view ref, const SimilarityProvider& similarity) {
  const TokenSequence h = tokenize(hyp);
  const TokenSequence r = tokenize(ref);
  const double cos = similarity.similarity(h, r);
  if (h.empty() || r.empty()) return cos / 3.0;
  return (cos + rouge_l(h, r) + bleu(h, r)) / 3.0;
}

ImageScore score_image(const PredictionRecord* pred, const GroundTruthRecord& gt,
                       const SimilarityProvider& similarity) {
  ImageScore s;
  const bool tampered = gt.verdict == Verdict::Tampered;
  if (!pred) {
    if (tampered) {
      s.ocr = 0.0;
      s.loc = 0.0;
    }
    return s;
  }
  if (pred->id != gt.id) throw IdMismatch("prediction '" + pred->id + "' scored against '" + gt.id + "'");
  s.cls = pred->verdict == gt.verdict ? 1.0 : 0.0;
  if (tampered) {
    const bool flagged = pred->verdict == Verdict::Tampered;
    s.ocr = flagged && pred->text && gt.text ? 1.0 - normed_levenshtein(*pred->text, *gt.text) : 0.0;
    s.loc = flagged && pred->bbox && gt.bbox ? iou(*pred->bbox, *gt.bbox) : 0.0;
  }
  s.res = reasoning_score(pred->reasoning, gt.reasoning_annotation, similarity);
  return s;
}

RegionAssignment match_multi_region(std::span<const PredictionRecord> preds,
                                    std::span<const GroundTruthRecord> gts) {
  struct Candidate {
    double iou;
    std::size_t gt;
    std::size_t pred;
  };
  std::vector<Candidate> candidates;
  for (std::size_t p = 0; p < preds.size(); ++p) {
    if (!preds[p].bbox) continue;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (!gts[g].bbox) continue;
      candidates.push_back({iou(*preds[p].bbox, *gts[g].bbox), g, p});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.gt != b.gt) return a.gt < b.gt;
    return a.pred < b.pred;
  });
  std::vector<bool> pred_used(preds.size(), false), gt_used(gts.size(), false);
  RegionAssignment out;
  for (const auto& c : candidates) {
    if (pred_used[c.pred] || gt_used[c.gt]) continue;
    pred_used[c.pred] = gt_used[c.gt] = true;
    out.pairs.emplace_back(c.pred, c.gt);
  }
  for (std::size_t p = 0; p < preds.size(); ++p) {
    if (!pred_used[p]) out.unmatched_preds.push_back(p);
  }
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (!gt_used[g]) out.unmatched_gts.push_back(g);
  }
  return out;
}

ImageEvaluation evaluate_image(std::span<const PredictionRecord> preds, std::span<const GroundTruthRecord> gts,
                               const SimilarityProvider& similarity) {
  if (gts.empty()) throw DataError("image evaluation needs at least one ground-truth record");
  const GroundTruthRecord& head = gts.front();
  ImageEvaluation ev;
  ev.image_id = std::string(image_id(head.id));
  ev.subset = head.subset;
  ev.gt_verdict = head.verdict;
  ev.gt_records = gts.size();
  const bool gt_tampered = head.verdict == Verdict::Tampered;
  const std::size_t regions = gt_tampered ? gts.size() : 0;

  if (preds.empty()) {
    ev.prediction_missing = true;
    ev.ocr.assign(regions, 0.0);
    ev.loc.assign(regions, 0.0);
    return ev;
  }
  const PredictionRecord& lead = preds.front();
  ev.cls = lead.verdict == head.verdict ? 1.0 : 0.0;
  ev.res = reasoning_score(lead.reasoning, head.reasoning_annotation, similarity);

  std::vector<PredictionRecord> flagged;
  if (lead.verdict == Verdict::Tampered) {
    for (const auto& p : preds) {
      if (p.verdict == Verdict::Tampered) flagged.push_back(p);
    }
  }
  if (!gt_tampered) {
    ev.false_positive_regions = flagged.size();
    return ev;
  }
  ev.ocr.assign(regions, 0.0);
  ev.loc.assign(regions, 0.0);
  const RegionAssignment assignment = match_multi_region(flagged, gts);
  for (const auto& [p, g] : assignment.pairs) {
    const PredictionRecord& pr = flagged[p];
    const GroundTruthRecord& gr = gts[g];
    if (pr.text && gr.text) ev.ocr[g] = 1.0 - normed_levenshtein(*pr.text, *gr.text);
    if (pr.bbox && gr.bbox) ev.loc[g] = iou(*pr.bbox, *gr.bbox);
  }
  ev.false_positive_regions = assignment.unmatched_preds.size();
  return ev;
}

Denominator parse_denominator(std::string_view s) {
  if (s == "tampered") return Denominator::Tampered;
  if (s == "all") return Denominator::All;
  throw Error("unknown denominator '" + std::string(s) + "' (expected tampered or all)");
}

std::string_view to_string(Denominator d) { return d == Denominator::All ? "all" : "tampered"; }

MetricReport aggregate(std::span<const ImageEvaluation> images, Denominator denominator) {
  // Reduce in image-id order so the float sums do not depend on input order.
  std::vector<const ImageEvaluation*> order;
  order.reserve(images.size());
  for (const auto& im : images) order.push_back(&im);
  std::stable_sort(order.begin(), order.end(),
                   [](const ImageEvaluation* a, const ImageEvaluation* b) { return a->image_id < b->image_id; });

  struct Sums {
    double cls = 0, res = 0, ocr = 0, loc = 0;
    std::size_t regions = 0, untampered_images = 0;
    SubsetMetrics m;
  };
  std::map<Subset, Sums> sums;
  for (const ImageEvaluation* im : order) {
    Sums& s = sums[im->subset];
    ++s.m.n_images;
    s.cls += im->cls;
    s.res += im->res;
    for (double v : im->ocr) s.ocr += v;
    for (double v : im->loc) s.loc += v;
    s.regions += im->ocr.size();
    if (im->gt_verdict != Verdict::Tampered) ++s.untampered_images;
    switch (im->gt_verdict) {
      case Verdict::Real: s.m.n_real += im->gt_records; break;
      case Verdict::Generated: s.m.n_generated += im->gt_records; break;
      case Verdict::Tampered: s.m.n_tampered += im->gt_records; break;
    }
    if (im->prediction_missing) s.m.n_missing_predictions += im->gt_records;
    s.m.n_false_positive_regions += im->false_positive_regions;
  }

  MetricReport report;
  report.denominator = denominator;
  for (auto& [subset, s] : sums) {
    SubsetMetrics m = s.m;
    const double n = static_cast<double>(m.n_images);
    m.cls_acc = 100.0 * s.cls / n;
    m.res_score = 100.0 * s.res / n;
    const std::size_t denom = denominator == Denominator::All ? s.regions + s.untampered_images : s.regions;
    if (denom > 0) {
      m.ocr_score = 100.0 * s.ocr / static_cast<double>(denom);
      m.loc_iou = 100.0 * s.loc / static_cast<double>(denom);
    }
    report.subsets[subset] = m;
  }
  return report;
}

MetricReport evaluate(std::span<const PredictionRecord> preds, std::span<const GroundTruthRecord> gts,
                      const EvalOptions& options) {
  const TermFrequencyCosine default_similarity;
  const SimilarityProvider& similarity = options.similarity ? *options.similarity : default_similarity;

  std::set<std::string_view> seen;
  for (const auto& g : gts) {
    if (!seen.insert(g.id).second) throw DataError("duplicate ground-truth id '" + g.id + "'");
  }
  seen.clear();
  for (const auto& p : preds) {
    if (!seen.insert(p.id).second) throw DataError("duplicate prediction id '" + p.id + "'");
  }

  std::vector<std::string> image_order;
  std::unordered_map<std::string, std::vector<GroundTruthRecord>> gt_by_image;
  for (const auto& g : gts) {
    const std::string key(image_id(g.id));
    auto [it, inserted] = gt_by_image.try_emplace(key);
    if (inserted) {
      image_order.push_back(key);
    } else {
      const GroundTruthRecord& first = it->second.front();
      if (first.verdict != g.verdict || first.subset != g.subset) {
        throw DataError("region records of image '" + key + "' disagree on verdict or subset");
      }
    }
    it->second.push_back(g);
  }

  MetricReport report;
  std::unordered_map<std::string, std::vector<PredictionRecord>> pred_by_image;
  for (const auto& p : preds) {
    const std::string key(image_id(p.id));
    if (!gt_by_image.count(key)) {
      report.unmatched_prediction_ids.push_back(p.id);
      continue;
    }
    pred_by_image[key].push_back(p);
  }

  std::vector<ImageEvaluation> evaluations(image_order.size());
  parallel_for(image_order.size(), options.jobs, [&](std::size_t i) {
    const std::string& key = image_order[i];
    auto it = pred_by_image.find(key);
    static const std::vector<PredictionRecord> kNone;
    const auto& image_preds = it == pred_by_image.end() ? kNone : it->second;
    evaluations[i] = evaluate_image(image_preds, gt_by_image.at(key), similarity);
  });

  MetricReport aggregated = aggregate(evaluations, options.denominator);
  aggregated.label = options.label;
  aggregated.unmatched_prediction_ids = std::move(report.unmatched_prediction_ids);
  for (const auto& id : aggregated.unmatched_prediction_ids) {
    aggregated.warnings.push_back("prediction '" + id + "' has no ground truth");
  }
  return aggregated;
}

ReportFormat parse_report_format(std::string_view s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "md" || s == "markdown") return ReportFormat::Markdown;
  throw UnknownFormat("unknown report format '" + std::string(s) + "' (expected json, csv or md)");
}

double round_percent(double v) { return std::round(v * 10.0) / 10.0; }

namespace {

std::string fixed1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", round_percent(v));
  return buf;
}

std::string subset_title(Subset s) {
  switch (s) {
    case Subset::Test: return "Test";
    case Subset::Cis: return "CIS";
    case Subset::Ctm: return "CTM";
    case Subset::Cl: return "CL";
  }
  return "Test";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += (c == '\n' || c == '\r') ? ' ' : c;
  }
  return out;
}

std::string emit_json(const MetricReport& report) {
  using OJson = nlohmann::ordered_json;
  auto pct = [](const std::optional<double>& v) { return v ? OJson(round_percent(*v)) : OJson(nullptr); };
  OJson j;
  j["label"] = report.label;
  j["denominator"] = to_string(report.denominator);
  OJson subsets = OJson::object();
  for (Subset s : kAllSubsets) {
    auto it = report.subsets.find(s);
    if (it == report.subsets.end()) {
      subsets[std::string(to_string(s))] = nullptr;
      continue;
    }
    const SubsetMetrics& m = it->second;
    OJson o;
    o["cls"] = round_percent(m.cls_acc);
    o["ocr"] = pct(m.ocr_score);
    o["loc"] = pct(m.loc_iou);
    o["res"] = round_percent(m.res_score);
    o["n_images"] = m.n_images;
    o["n_real"] = m.n_real;
    o["n_generated"] = m.n_generated;
    o["n_tampered"] = m.n_tampered;
    o["n_missing_predictions"] = m.n_missing_predictions;
    o["n_false_positive_regions"] = m.n_false_positive_regions;
    subsets[std::string(to_string(s))] = std::move(o);
  }
  j["subsets"] = std::move(subsets);
  j["unmatched_prediction_ids"] = report.unmatched_prediction_ids;
  j["warnings"] = report.warnings;
  return j.dump(2, ' ', false, OJson::error_handler_t::replace) + "\n";
}

std::string emit_csv(const MetricReport& report) {
  std::ostringstream out;
  out << "label,subset,status,cls,ocr,loc,res,n_images,n_real,n_generated,n_tampered,"
         "n_missing_predictions,n_false_positive_regions\n";
  auto opt = [](const std::optional<double>& v) { return v ? fixed1(*v) : std::string(); };
  for (Subset s : kAllSubsets) {
    out << csv_field(report.label) << ',' << to_string(s) << ',';
    auto it = report.subsets.find(s);
    if (it == report.subsets.end()) {
      out << "absent,,,,,,,,,,\n";
      continue;
    }
    const SubsetMetrics& m = it->second;
    out << "ok," << fixed1(m.cls_acc) << ',' << opt(m.ocr_score) << ',' << opt(m.loc_iou) << ','
        << fixed1(m.res_score) << ',' << m.n_images << ',' << m.n_real << ',' << m.n_generated << ','
        << m.n_tampered << ',' << m.n_missing_predictions << ',' << m.n_false_positive_regions << '\n';
  }
  return out.str();
}

}  // namespace

std::string emit_markdown(std::span<const MetricReport> reports) {
  std::ostringstream out;
  out << "| Run |";
  for (Subset s : kAllSubsets) {
    const std::string t = subset_title(s);
    out << ' ' << t << " Cls. | " << t << " OCR | " << t << " Loc. | " << t << " Res. |";
  }
  out << "\n|---|";
  for (std::size_t i = 0; i < 4 * std::size(kAllSubsets); ++i) out << "---:|";
  out << '\n';
  for (const MetricReport& r : reports) {
    out << "| " << md_cell(r.label) << " |";
    for (Subset s : kAllSubsets) {
      auto it = r.subsets.find(s);
      if (it == r.subsets.end()) {
        out << " - | - | - | - |";
        continue;
      }
      const SubsetMetrics& m = it->second;
      auto opt = [](const std::optional<double>& v) { return v ? fixed1(*v) : std::string("-"); };
      out << ' ' << fixed1(m.cls_acc) << " | " << opt(m.ocr_score) << " | " << opt(m.loc_iou) << " | "
          << fixed1(m.res_score) << " |";
    }
    out << '\n';
  }
  return out.str();
}

std::string emit_report(const MetricReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return emit_json(report);
    case ReportFormat::Csv: return emit_csv(report);
    case ReportFormat::Markdown: return emit_markdown(std::span<const MetricReport>(&report, 1));
  }
  throw UnknownFormat("unknown report format");
}

}  // namespace textshield
