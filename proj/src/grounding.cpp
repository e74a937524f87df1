#include "textshield/grounding.hpp"

#include "textshield/mask.hpp"
#include "textshield/schema.hpp"

namespace textshield {

namespace {

Json field_json(const GroundingField& f) {
  if (const auto* box = std::get_if<BBox>(&f)) return Json{{"bbox", to_json(*box)}};
  return Json{{"text", std::get<std::string>(f)}};
}

}  // namespace

GroundingPair make_grounding_pair(const GroundTruthRecord& gt, const OcrLayout& layout,
                                  GroundingDirection direction, std::size_t instance_index) {
  if (gt.verdict != Verdict::Real) throw NotRealImage();
  if (gt.id != layout.id) throw IdMismatch("ground truth '" + gt.id + "' paired with layout '" + layout.id + "'");
  if (instance_index >= layout.instances.size()) {
    throw IndexOutOfRange("instance " + std::to_string(instance_index) + " of " +
                          std::to_string(layout.instances.size()));
  }
  const OcrInstance& inst = layout.instances[instance_index];
  GroundingPair pair;
  pair.id = gt.id;
  pair.direction = direction;
  pair.instance_index = instance_index;
  if (direction == GroundingDirection::BoxToText) {
    pair.prompt = inst.bbox;
    pair.target = inst.text;
  } else {
    pair.prompt = inst.text;
    pair.target = inst.bbox;
  }
  return pair;
}

Json to_json(const GroundingPair& pair) {
  return Json{{"id", pair.id},
              {"task", pair.direction == GroundingDirection::BoxToText ? "box_to_text" : "text_to_box"},
              {"instance", pair.instance_index},
              {"prompt", field_json(pair.prompt)},
              {"target", field_json(pair.target)}};
}

ForensicTarget make_forensic_target(const GroundTruthRecord& gt, std::string description) {
  if (gt.verdict != Verdict::Tampered) throw DataError("forensic region targets need a tampered image");
  if (!gt.mask) throw DataError("ground truth '" + gt.id + "' has no mask");
  ForensicTarget t;
  t.description = std::move(description);
  t.bbox = min_bbox(*gt.mask);
  t.mask_string = encode_mask_string(*gt.mask);
  return t;
}

Json to_json(const ForensicTarget& t) {
  return Json{{"verdict", to_string(t.verdict)},
              {"description", t.description},
              {"bbox", to_json(t.bbox)},
              {"mask", t.mask_string}};
}

}  // namespace textshield
