#pragma once

#include <cstddef>
#include <string>
#include <variant>

#include "textshield/types.hpp"

namespace textshield {

enum class GroundingDirection { BoxToText, TextToBox };

class NotRealImage : public Error {
 public:
  NotRealImage() : Error("grounding pairs are only built from real images") {}
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

using GroundingField = std::variant<BBox, std::string>;

/// OCR reference-grounding training pair for one text instance of a real image.
struct GroundingPair {
  std::string id;
  GroundingDirection direction = GroundingDirection::BoxToText;
  std::size_t instance_index = 0;
  GroundingField prompt;
  GroundingField target;
};

GroundingPair make_grounding_pair(const GroundTruthRecord& gt, const OcrLayout& layout,
                                  GroundingDirection direction, std::size_t instance_index);

Json to_json(const GroundingPair& pair);

/// Region-level supervision target for a locally tampered image: the
/// externally produced description plus box and mask string, as three
/// separately named fields.
struct ForensicTarget {
  Verdict verdict = Verdict::Tampered;
  std::string description;
  BBox bbox;
  std::string mask_string;
};

/// The box is derived from the mask (minimum bounding box) and the mask
/// string from its 32x32 resample. Throws DataError when gt has no mask and
/// EmptyMask when the mask is blank.
ForensicTarget make_forensic_target(const GroundTruthRecord& gt, std::string description);

Json to_json(const ForensicTarget& target);

}  // namespace textshield
