#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "textshield/types.hpp"

namespace textshield::testing {

inline PredictionRecord real_pred(std::string id, std::string reasoning = "looks natural") {
  PredictionRecord p;
  p.id = std::move(id);
  p.verdict = Verdict::Real;
  p.reasoning = std::move(reasoning);
  return p;
}

inline PredictionRecord tampered_pred(std::string id, std::string text, BBox box,
                                      ForgeryMethod method = ForgeryMethod::Generation,
                                      std::string reasoning = "edges blurry") {
  PredictionRecord p;
  p.id = std::move(id);
  p.verdict = Verdict::Tampered;
  p.method = method;
  p.text = std::move(text);
  p.bbox = box;
  p.reasoning = std::move(reasoning);
  return p;
}

inline GroundTruthRecord real_gt(std::string id, Subset subset = Subset::Test,
                                 std::string reasoning = "looks natural") {
  GroundTruthRecord g;
  g.id = std::move(id);
  g.subset = subset;
  g.verdict = Verdict::Real;
  g.reasoning_annotation = std::move(reasoning);
  return g;
}

inline GroundTruthRecord tampered_gt(std::string id, std::string text, BBox box, Subset subset = Subset::Test,
                                     ForgeryMethod method = ForgeryMethod::Generation,
                                     std::string reasoning = "edges blurry") {
  GroundTruthRecord g;
  g.id = std::move(id);
  g.subset = subset;
  g.verdict = Verdict::Tampered;
  g.method = method;
  g.text = std::move(text);
  g.bbox = box;
  g.reasoning_annotation = std::move(reasoning);
  return g;
}

// Fresh directory under the system temp path, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("textshield-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  f << s;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

}  // namespace textshield::testing
