#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "textshield/types.hpp"

namespace textshield {

/// Answer fields extracted from a completion. Every field is best-effort:
/// a malformed payload may still yield a verdict.
struct AnswerPayload {
  std::optional<Verdict> verdict;
  std::optional<ForgeryMethod> method;
  std::optional<std::string> text;
  std::optional<BBox> bbox;

  friend bool operator==(const AnswerPayload&, const AnswerPayload&) = default;
};

struct ParsedOutput {
  std::string think;
  std::string answer_raw;
  AnswerPayload answer;
  /// Exactly one think block followed by exactly one answer block, only
  /// whitespace around them, no stray tags.
  bool tags_ok = false;
  /// Answer body is a JSON object obeying the verdict presence rules.
  bool payload_ok = false;
  /// tags_ok && payload_ok.
  bool format_ok = false;
  std::vector<std::string> diagnostics;
};

/// Total: never throws, failures become diagnostics.
ParsedOutput parse_completion(std::string_view raw);

/// Canonical `<think>..</think><answer>{json}</answer>` rendering.
std::string render_completion(const PredictionRecord& p);

/// `&`, `<`, `>` to entities and back. unescape_reasoning(escape_reasoning(s)) == s.
std::string escape_reasoning(std::string_view s);
std::string unescape_reasoning(std::string_view s);

/// Builds a prediction from a parse result. Returns nullopt when the payload
/// does not satisfy the PredictionRecord schema (no verdict, or a tampered
/// verdict without method/text/bbox).
std::optional<PredictionRecord> to_prediction(const std::string& id, const ParsedOutput& parsed,
                                              std::string_view raw);

Json to_json(const ParsedOutput& p);

}  // namespace textshield
