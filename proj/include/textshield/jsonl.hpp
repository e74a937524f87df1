#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "textshield/schema.hpp"
#include "textshield/types.hpp"

namespace textshield {

class IoError : public Error {
 public:
  using Error::Error;
};

/// One parsed JSONL line with its 1-based line number.
struct JsonLine {
  std::size_t line_no = 0;
  Json value;
};

/// Blank lines are skipped and a trailing '\r' is dropped. Throws IoError
/// when the file cannot be opened and SchemaViolation on malformed JSON.
std::vector<JsonLine> read_jsonl(const std::filesystem::path& path);
std::vector<JsonLine> parse_jsonl(std::string_view contents, const std::string& source = "<memory>");

/// Validates every line, collecting all violations (prefixed with path and
/// line number) before throwing a single SchemaViolation.
std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path);
std::vector<GroundTruthRecord> load_groundtruth(const std::filesystem::path& path);
std::vector<OcrLayout> load_ocr(const std::filesystem::path& path);

/// Writes next to the target and renames into place, so readers never see
/// a partially written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Serialises one object per line with '\n' endings.
std::string to_jsonl(const std::vector<Json>& lines);

}  // namespace textshield
