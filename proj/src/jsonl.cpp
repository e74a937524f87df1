#include "textshield/jsonl.hpp"

#include <atomic>
#include <fstream>
#include <iterator>
#include <sstream>

#include <unistd.h>

namespace textshield {

namespace {

std::string read_all(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw IoError("input file not found: " + path.string());
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

template <class Record, class Validate>
std::vector<Record> load_records(const std::filesystem::path& path, Validate validate) {
  const auto lines = read_jsonl(path);
  std::vector<Record> out;
  out.reserve(lines.size());
  std::vector<std::string> problems;
  for (const auto& line : lines) {
    auto v = validate(line.value);
    if (v) {
      out.push_back(std::move(v).value());
      continue;
    }
    for (const auto& e : v.errors()) {
      problems.push_back(path.string() + ":" + std::to_string(line.line_no) + ": " + e.to_string());
    }
  }
  if (!problems.empty()) {
    std::string msg = std::to_string(problems.size()) + " schema violation(s):";
    for (const auto& p : problems) msg += "\n  " + p;
    throw SchemaViolation(msg);
  }
  return out;
}

}  // namespace

std::vector<JsonLine> parse_jsonl(std::string_view contents, const std::string& source) {
  std::vector<JsonLine> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < contents.size()) {
    std::size_t end = contents.find('\n', start);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    try {
      out.push_back({line_no, Json::parse(line)});
    } catch (const Json::parse_error& e) {
      throw SchemaViolation(source + ":" + std::to_string(line_no) + ": invalid JSON: " + e.what());
    }
  }
  return out;
}

std::vector<JsonLine> read_jsonl(const std::filesystem::path& path) {
  return parse_jsonl(read_all(path), path.string());
}

std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path) {
  return load_records<PredictionRecord>(path, validate_prediction);
}

std::vector<GroundTruthRecord> load_groundtruth(const std::filesystem::path& path) {
  return load_records<GroundTruthRecord>(path, validate_groundtruth);
}

std::vector<OcrLayout> load_ocr(const std::filesystem::path& path) {
  return load_records<OcrLayout>(path, validate_ocr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  static std::atomic<unsigned> counter{0};
  std::filesystem::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(counter.fetch_add(1));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + path.string());
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f.flush();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("failed writing " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

std::string to_jsonl(const std::vector<Json>& lines) {
  std::string out;
  for (const auto& j : lines) {
    out += j.dump(-1, ' ', false, Json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

}  // namespace textshield
