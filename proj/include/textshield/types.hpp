#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace textshield {

using Json = nlohmann::json;

/// Image-level forensic label.
enum class Verdict { Real, Generated, Tampered };

/// How a locally tampered region was produced.
enum class ForgeryMethod { CopyPaste, Generation };

/// Evaluation split a ground-truth record belongs to.
enum class Subset { Test, Cis, Ctm, Cl };

inline constexpr Subset kAllSubsets[] = {Subset::Test, Subset::Cis, Subset::Ctm, Subset::Cl};

std::string_view to_string(Verdict v);
std::string_view to_string(ForgeryMethod m);
std::string_view to_string(Subset s);

std::optional<Verdict> parse_verdict(std::string_view s);
std::optional<ForgeryMethod> parse_method(std::string_view s);
std::optional<Subset> parse_subset(std::string_view s);

/// Base class for every error raised by the core library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs that violate a record schema.
class SchemaViolation : public Error {
 public:
  using Error::Error;
};

/// Records that are individually valid but inconsistent with each other.
class DataError : public Error {
 public:
  using Error::Error;
};

class IdMismatch : public DataError {
 public:
  using DataError::DataError;
};

/// Axis-aligned box in pixel coordinates, origin top-left.
struct BBox {
  double x1 = 0;
  double y1 = 0;
  double x2 = 0;
  double y2 = 0;

  /// Throws SchemaViolation unless the coordinates are finite, non-negative
  /// and span a positive area.
  static BBox make(double x1, double y1, double x2, double y2);

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (x1 + x2); }
  double center_y() const { return 0.5 * (y1 + y2); }

  friend bool operator==(const BBox&, const BBox&) = default;
};

/// Row-major binary mask; 1 marks a tampered pixel.
struct MaskGrid {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> cells;

  MaskGrid() = default;
  MaskGrid(int w, int h, std::uint8_t fill = 0);

  std::uint8_t at(int row, int col) const { return cells[static_cast<std::size_t>(row) * width + col]; }
  void set(int row, int col, std::uint8_t v) { cells[static_cast<std::size_t>(row) * width + col] = v; }

  friend bool operator==(const MaskGrid&, const MaskGrid&) = default;
};

/// One model answer per image (or per region, see region ids in the harness).
struct PredictionRecord {
  std::string id;
  Verdict verdict = Verdict::Real;
  std::optional<ForgeryMethod> method;
  std::optional<std::string> text;
  std::optional<BBox> bbox;
  std::string reasoning;
  std::optional<std::string> raw_output;
  /// Unknown input fields, written back verbatim.
  Json extra = Json::object();

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

struct GroundTruthRecord {
  std::string id;
  Subset subset = Subset::Test;
  Verdict verdict = Verdict::Real;
  std::optional<ForgeryMethod> method;
  std::optional<std::string> text;
  std::optional<BBox> bbox;
  std::optional<MaskGrid> mask;
  std::string reasoning_annotation;
  std::optional<std::string> language;
  std::optional<std::string> domain;
  Json extra = Json::object();

  friend bool operator==(const GroundTruthRecord&, const GroundTruthRecord&) = default;
};

struct OcrInstance {
  std::string text;
  BBox bbox;

  friend bool operator==(const OcrInstance&, const OcrInstance&) = default;
};

struct OcrLayout {
  std::string id;
  std::vector<OcrInstance> instances;

  friend bool operator==(const OcrLayout&, const OcrLayout&) = default;
};

}  // namespace textshield
