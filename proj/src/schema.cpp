#include "textshield/schema.hpp"

#include <cmath>
#include <set>

#include "textshield/mask.hpp"

namespace textshield {

namespace {

const std::set<std::string> kPredictionFields = {"id", "verdict", "method", "text", "bbox", "reasoning",
                                                 "raw_output"};
const std::set<std::string> kGroundTruthFields = {"id",   "subset",   "verdict",  "method",
                                                  "text", "bbox",     "mask",     "reasoning_annotation",
                                                  "language", "domain"};

bool present(const Json& raw, const char* key) {
  auto it = raw.find(key);
  return it != raw.end() && !it->is_null();
}

std::optional<std::string> required_string(const Json& raw, const char* key, std::vector<SchemaError>& errors,
                                           bool allow_empty = true) {
  if (!present(raw, key)) {
    errors.push_back({key, "missing required field"});
    return std::nullopt;
  }
  const Json& v = raw.at(key);
  if (!v.is_string()) {
    errors.push_back({key, "expected a string"});
    return std::nullopt;
  }
  auto s = v.get<std::string>();
  if (!allow_empty && s.empty()) {
    errors.push_back({key, "must not be empty"});
    return std::nullopt;
  }
  return s;
}

std::optional<std::string> optional_string(const Json& raw, const char* key, std::vector<SchemaError>& errors) {
  if (!present(raw, key)) return std::nullopt;
  const Json& v = raw.at(key);
  if (!v.is_string()) {
    errors.push_back({key, "expected a string"});
    return std::nullopt;
  }
  return v.get<std::string>();
}

std::optional<Verdict> read_verdict(const Json& raw, std::vector<SchemaError>& errors) {
  auto s = required_string(raw, "verdict", errors);
  if (!s) return std::nullopt;
  auto v = parse_verdict(*s);
  if (!v) errors.push_back({"verdict", "unknown verdict '" + *s + "' (expected real, generated or tampered)"});
  return v;
}

std::optional<ForgeryMethod> read_method(const Json& raw, std::vector<SchemaError>& errors) {
  auto s = optional_string(raw, "method", errors);
  if (!s) return std::nullopt;
  auto m = parse_method(*s);
  if (!m) errors.push_back({"method", "unknown method '" + *s + "' (expected copy-paste or generation)"});
  return m;
}

// Tampered verdicts need all three region fields; others must have none.
void check_presence(const Json& raw, const std::optional<Verdict>& verdict, std::vector<SchemaError>& errors) {
  if (!verdict) return;
  for (const char* key : {"method", "text", "bbox"}) {
    const bool has = present(raw, key);
    if (*verdict == Verdict::Tampered && !has) {
      errors.push_back({key, "required when verdict is tampered"});
    } else if (*verdict != Verdict::Tampered && has) {
      errors.push_back({key, std::string("forbidden when verdict is ") + std::string(to_string(*verdict))});
    }
  }
}

Json collect_extra(const Json& raw, const std::set<std::string>& known) {
  Json extra = Json::object();
  for (auto it = raw.begin(); it != raw.end(); ++it) {
    if (!known.count(it.key())) extra[it.key()] = it.value();
  }
  return extra;
}

std::optional<MaskGrid> read_mask(const Json& raw, std::vector<SchemaError>& errors) {
  if (!present(raw, "mask")) return std::nullopt;
  const Json& m = raw.at("mask");
  try {
    if (m.is_string()) return decode_mask_string(m.get<std::string>());
    if (m.is_object() && m.contains("width") && m.contains("height") && m.contains("cells") &&
        m["width"].is_number_integer() && m["height"].is_number_integer() && m["cells"].is_string()) {
      const int w = m["width"].get<int>();
      const int h = m["height"].get<int>();
      const auto cells = m["cells"].get<std::string>();
      if (w <= 0 || h <= 0 || cells.size() != static_cast<std::size_t>(w) * static_cast<std::size_t>(h)) {
        errors.push_back({"mask", "cells length must equal width*height"});
        return std::nullopt;
      }
      MaskGrid grid(w, h);
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] != '0' && cells[i] != '1') {
          errors.push_back({"mask", "cells must contain only '0' and '1'"});
          return std::nullopt;
        }
        grid.cells[i] = cells[i] == '1';
      }
      return grid;
    }
  } catch (const BadMaskString& e) {
    errors.push_back({"mask", e.what()});
    return std::nullopt;
  }
  errors.push_back({"mask", "expected a 1024-char mask string or {width, height, cells}"});
  return std::nullopt;
}

}  // namespace

std::optional<BBox> parse_bbox(const Json& raw, const std::string& field, std::vector<SchemaError>& errors) {
  if (!raw.is_array() || raw.size() != 4) {
    errors.push_back({field, "expected [x1,y1,x2,y2]"});
    return std::nullopt;
  }
  double c[4];
  for (std::size_t i = 0; i < 4; ++i) {
    if (!raw[i].is_number()) {
      errors.push_back({field, "coordinates must be numbers"});
      return std::nullopt;
    }
    c[i] = raw[i].get<double>();
  }
  try {
    return BBox::make(c[0], c[1], c[2], c[3]);
  } catch (const SchemaViolation& e) {
    errors.push_back({field, e.what()});
    return std::nullopt;
  }
}

Validated<PredictionRecord> validate_prediction(const Json& raw) {
  if (!raw.is_object()) return std::vector<SchemaError>{{"<record>", "expected a JSON object"}};
  std::vector<SchemaError> errors;
  PredictionRecord rec;
  auto id = required_string(raw, "id", errors, false);
  auto verdict = read_verdict(raw, errors);
  auto reasoning = required_string(raw, "reasoning", errors);
  check_presence(raw, verdict, errors);
  rec.method = read_method(raw, errors);
  rec.text = optional_string(raw, "text", errors);
  if (present(raw, "bbox")) rec.bbox = parse_bbox(raw["bbox"], "bbox", errors);
  rec.raw_output = optional_string(raw, "raw_output", errors);
  if (!errors.empty()) return errors;
  rec.id = *id;
  rec.verdict = *verdict;
  rec.reasoning = *reasoning;
  rec.extra = collect_extra(raw, kPredictionFields);
  return rec;
}

Validated<GroundTruthRecord> validate_groundtruth(const Json& raw) {
  if (!raw.is_object()) return std::vector<SchemaError>{{"<record>", "expected a JSON object"}};
  std::vector<SchemaError> errors;
  GroundTruthRecord rec;
  auto id = required_string(raw, "id", errors, false);
  std::optional<Subset> subset;
  if (auto s = required_string(raw, "subset", errors)) {
    subset = parse_subset(*s);
    if (!subset) errors.push_back({"subset", "unknown subset '" + *s + "' (expected test, cis, ctm or cl)"});
  }
  auto verdict = read_verdict(raw, errors);
  auto reasoning = required_string(raw, "reasoning_annotation", errors);
  check_presence(raw, verdict, errors);
  rec.method = read_method(raw, errors);
  rec.text = optional_string(raw, "text", errors);
  if (present(raw, "bbox")) rec.bbox = parse_bbox(raw["bbox"], "bbox", errors);
  rec.mask = read_mask(raw, errors);
  rec.language = optional_string(raw, "language", errors);
  rec.domain = optional_string(raw, "domain", errors);
  if (!errors.empty()) return errors;
  rec.id = *id;
  rec.subset = *subset;
  rec.verdict = *verdict;
  rec.reasoning_annotation = *reasoning;
  rec.extra = collect_extra(raw, kGroundTruthFields);
  return rec;
}

Validated<OcrLayout> validate_ocr(const Json& raw) {
  if (!raw.is_object()) return std::vector<SchemaError>{{"<record>", "expected a JSON object"}};
  std::vector<SchemaError> errors;
  OcrLayout layout;
  auto id = required_string(raw, "id", errors, false);
  if (!present(raw, "instances") || !raw["instances"].is_array()) {
    errors.push_back({"instances", "expected an array of {text, bbox}"});
  } else {
    const Json& list = raw["instances"];
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string field = "instances[" + std::to_string(i) + "]";
      const Json& inst = list[i];
      if (!inst.is_object()) {
        errors.push_back({field, "expected an object"});
        continue;
      }
      std::optional<std::string> text;
      if (!inst.contains("text") || !inst["text"].is_string()) {
        errors.push_back({field + ".text", "expected a string"});
      } else {
        text = inst["text"].get<std::string>();
      }
      std::optional<BBox> box;
      if (!inst.contains("bbox")) {
        errors.push_back({field + ".bbox", "missing required field"});
      } else {
        box = parse_bbox(inst["bbox"], field + ".bbox", errors);
      }
      if (text && box) layout.instances.push_back({*text, *box});
    }
  }
  if (!errors.empty()) return errors;
  layout.id = *id;
  return layout;
}

Validated<AnyRecord> validate_record(const Json& raw, RecordKind kind) {
  switch (kind) {
    case RecordKind::Prediction: {
      auto r = validate_prediction(raw);
      if (!r) return r.errors();
      return AnyRecord{std::move(r).value()};
    }
    case RecordKind::GroundTruth: {
      auto r = validate_groundtruth(raw);
      if (!r) return r.errors();
      return AnyRecord{std::move(r).value()};
    }
    case RecordKind::Ocr: {
      auto r = validate_ocr(raw);
      if (!r) return r.errors();
      return AnyRecord{std::move(r).value()};
    }
  }
  return std::vector<SchemaError>{{"<kind>", "unknown record kind"}};
}

Json to_json(const BBox& b) { return Json::array({b.x1, b.y1, b.x2, b.y2}); }

Json to_json(const PredictionRecord& r) {
  Json j = Json::object();
  j["id"] = r.id;
  j["verdict"] = to_string(r.verdict);
  j["method"] = r.method ? Json(to_string(*r.method)) : Json(nullptr);
  j["text"] = r.text ? Json(*r.text) : Json(nullptr);
  j["bbox"] = r.bbox ? to_json(*r.bbox) : Json(nullptr);
  j["reasoning"] = r.reasoning;
  if (r.raw_output) j["raw_output"] = *r.raw_output;
  for (auto it = r.extra.begin(); it != r.extra.end(); ++it) j[it.key()] = it.value();
  return j;
}

Json to_json(const GroundTruthRecord& r) {
  Json j = Json::object();
  j["id"] = r.id;
  j["subset"] = to_string(r.subset);
  j["verdict"] = to_string(r.verdict);
  j["method"] = r.method ? Json(to_string(*r.method)) : Json(nullptr);
  j["text"] = r.text ? Json(*r.text) : Json(nullptr);
  j["bbox"] = r.bbox ? to_json(*r.bbox) : Json(nullptr);
  if (r.mask) {
    if (r.mask->width == kMaskSide && r.mask->height == kMaskSide) {
      j["mask"] = encode_mask_string(*r.mask);
    } else {
      std::string cells(r.mask->cells.size(), '0');
      for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = r.mask->cells[i] ? '1' : '0';
      j["mask"] = Json{{"width", r.mask->width}, {"height", r.mask->height}, {"cells", cells}};
    }
  }
  j["reasoning_annotation"] = r.reasoning_annotation;
  if (r.language) j["language"] = *r.language;
  if (r.domain) j["domain"] = *r.domain;
  for (auto it = r.extra.begin(); it != r.extra.end(); ++it) j[it.key()] = it.value();
  return j;
}

Json to_json(const OcrLayout& l) {
  Json instances = Json::array();
  for (const auto& inst : l.instances) instances.push_back(Json{{"text", inst.text}, {"bbox", to_json(inst.bbox)}});
  return Json{{"id", l.id}, {"instances", std::move(instances)}};
}

}  // namespace textshield
