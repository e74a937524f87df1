#pragma once

#include <string>
#include <variant>
#include <vector>

#include "textshield/types.hpp"

namespace textshield {

struct SchemaError {
  std::string field;
  std::string reason;

  std::string to_string() const { return field + ": " + reason; }
  friend bool operator==(const SchemaError&, const SchemaError&) = default;
};

enum class RecordKind { Prediction, GroundTruth, Ocr };

/// Either a fully typed record or every violation found; never both.
template <class T>
class Validated {
 public:
  Validated(T value) : value_(std::move(value)) {}
  Validated(std::vector<SchemaError> errors) : value_(std::move(errors)) {}

  bool ok() const { return std::holds_alternative<T>(value_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& { return std::get<T>(value_); }
  T&& value() && { return std::get<T>(std::move(value_)); }
  const std::vector<SchemaError>& errors() const { return std::get<std::vector<SchemaError>>(value_); }

 private:
  std::variant<T, std::vector<SchemaError>> value_;
};

Validated<PredictionRecord> validate_prediction(const Json& raw);
Validated<GroundTruthRecord> validate_groundtruth(const Json& raw);
Validated<OcrLayout> validate_ocr(const Json& raw);

using AnyRecord = std::variant<PredictionRecord, GroundTruthRecord, OcrLayout>;
Validated<AnyRecord> validate_record(const Json& raw, RecordKind kind);

/// Parses `[x1,y1,x2,y2]`; appends to `errors` under `field` on failure.
std::optional<BBox> parse_bbox(const Json& raw, const std::string& field, std::vector<SchemaError>& errors);

Json to_json(const BBox& b);
Json to_json(const PredictionRecord& r);
Json to_json(const GroundTruthRecord& r);
Json to_json(const OcrLayout& l);

}  // namespace textshield
