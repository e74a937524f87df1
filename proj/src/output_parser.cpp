#include "textshield/output_parser.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "textshield/schema.hpp"

namespace textshield {

namespace {

enum class Tag { ThinkOpen, ThinkClose, AnswerOpen, AnswerClose };

constexpr std::array<std::string_view, 4> kTagText = {"<think>", "</think>", "<answer>", "</answer>"};

struct TagHit {
  std::size_t pos;
  Tag tag;
  std::size_t end() const { return pos + kTagText[static_cast<int>(tag)].size(); }
};

std::vector<TagHit> find_tags(std::string_view raw) {
  std::vector<TagHit> hits;
  for (std::size_t pos = raw.find('<'); pos != std::string_view::npos; pos = raw.find('<', pos + 1)) {
    for (int t = 0; t < 4; ++t) {
      if (raw.substr(pos, kTagText[t].size()) == kTagText[t]) {
        hits.push_back({pos, static_cast<Tag>(t)});
        break;
      }
    }
  }
  return hits;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  });
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(first, last - first + 1);
}

const TagHit* first_of(const std::vector<TagHit>& hits, Tag tag, std::size_t from = 0) {
  for (const auto& h : hits) {
    if (h.tag == tag && h.pos >= from) return &h;
  }
  return nullptr;
}

bool check_grammar(std::string_view raw, const std::vector<TagHit>& hits, std::vector<std::string>& diag) {
  std::array<int, 4> counts{};
  for (const auto& h : hits) ++counts[static_cast<int>(h.tag)];
  bool ok = true;
  for (int t = 0; t < 4; ++t) {
    if (counts[t] == 0) {
      diag.push_back("missing " + std::string(kTagText[t]) + " tag");
      ok = false;
    } else if (counts[t] > 1) {
      diag.push_back("repeated " + std::string(kTagText[t]) + " tag");
      ok = false;
    }
  }
  if (!ok) return false;
  for (std::size_t i = 0; i < 4; ++i) {
    if (hits[i].tag != static_cast<Tag>(i)) {
      diag.push_back("tags out of order: expected <think>..</think><answer>..</answer>");
      return false;
    }
  }
  if (!is_blank(raw.substr(0, hits[0].pos))) {
    diag.push_back("text before <think>");
    ok = false;
  }
  if (!is_blank(raw.substr(hits[1].end(), hits[2].pos - hits[1].end()))) {
    diag.push_back("text between </think> and <answer>");
    ok = false;
  }
  if (!is_blank(raw.substr(hits[3].end()))) {
    diag.push_back("text after </answer>");
    ok = false;
  }
  return ok;
}

// Best-effort body of the first open tag, up to the next matching close tag.
std::optional<std::string_view> extract_block(std::string_view raw, const std::vector<TagHit>& hits, Tag open,
                                              Tag close, std::vector<std::string>& diag) {
  const TagHit* o = first_of(hits, open);
  if (!o) return std::nullopt;
  const TagHit* c = first_of(hits, close, o->end());
  if (!c) {
    diag.push_back("unterminated " + std::string(kTagText[static_cast<int>(open)]) + " block");
    return raw.substr(o->end());
  }
  return raw.substr(o->end(), c->pos - o->end());
}

bool parse_payload(std::string_view body, AnswerPayload& out, std::vector<std::string>& diag) {
  const Json j = Json::parse(trim(body), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    diag.push_back("answer body is not valid JSON");
    return false;
  }
  if (!j.is_object()) {
    diag.push_back("answer body is not a JSON object");
    return false;
  }
  bool ok = true;
  auto has = [&](const char* key) { return j.contains(key) && !j[key].is_null(); };

  if (!has("verdict") || !j["verdict"].is_string()) {
    diag.push_back("answer.verdict missing or not a string");
    ok = false;
  } else {
    out.verdict = parse_verdict(j["verdict"].get<std::string>());
    if (!out.verdict) {
      diag.push_back("answer.verdict '" + j["verdict"].get<std::string>() + "' is not real/generated/tampered");
      ok = false;
    }
  }
  if (has("method")) {
    if (j["method"].is_string()) out.method = parse_method(j["method"].get<std::string>());
    if (!out.method) {
      diag.push_back("answer.method is not copy-paste/generation");
      ok = false;
    }
  }
  if (has("text")) {
    if (j["text"].is_string()) {
      out.text = j["text"].get<std::string>();
    } else {
      diag.push_back("answer.text is not a string");
      ok = false;
    }
  }
  if (has("bbox")) {
    std::vector<SchemaError> errors;
    out.bbox = parse_bbox(j["bbox"], "answer.bbox", errors);
    for (const auto& e : errors) diag.push_back(e.to_string());
    ok = ok && errors.empty();
  }
  if (out.verdict) {
    const bool tampered = *out.verdict == Verdict::Tampered;
    for (const char* key : {"method", "text", "bbox"}) {
      if (tampered && !has(key)) {
        diag.push_back(std::string("answer.") + key + " required for a tampered verdict");
        ok = false;
      } else if (!tampered && has(key)) {
        diag.push_back(std::string("answer.") + key + " must be null unless tampered");
        ok = false;
      }
    }
  }
  return ok;
}

nlohmann::ordered_json coordinate(double v) {
  if (std::floor(v) == v && std::fabs(v) < 9.0e15) return static_cast<std::int64_t>(v);
  return v;
}

}  // namespace

std::string escape_reasoning(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_reasoning(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '&') {
      const auto rest = s.substr(i);
      if (rest.starts_with("&lt;")) {
        out += '<';
        i += 3;
        continue;
      }
      if (rest.starts_with("&gt;")) {
        out += '>';
        i += 3;
        continue;
      }
      if (rest.starts_with("&amp;")) {
        out += '&';
        i += 4;
        continue;
      }
    }
    out += s[i];
  }
  return out;
}

ParsedOutput parse_completion(std::string_view raw) {
  ParsedOutput p;
  const auto hits = find_tags(raw);
  p.tags_ok = check_grammar(raw, hits, p.diagnostics);
  if (auto think = extract_block(raw, hits, Tag::ThinkOpen, Tag::ThinkClose, p.diagnostics)) {
    p.think = unescape_reasoning(*think);
  }
  if (auto answer = extract_block(raw, hits, Tag::AnswerOpen, Tag::AnswerClose, p.diagnostics)) {
    p.answer_raw = std::string(*answer);
    p.payload_ok = parse_payload(*answer, p.answer, p.diagnostics);
  } else {
    p.diagnostics.push_back("no answer block");
  }
  p.format_ok = p.tags_ok && p.payload_ok;
  return p;
}

std::string render_completion(const PredictionRecord& p) {
  nlohmann::ordered_json payload;
  payload["verdict"] = to_string(p.verdict);
  payload["method"] = p.method ? nlohmann::ordered_json(to_string(*p.method)) : nlohmann::ordered_json(nullptr);
  payload["text"] = p.text ? nlohmann::ordered_json(*p.text) : nlohmann::ordered_json(nullptr);
  if (p.bbox) {
    payload["bbox"] = nlohmann::ordered_json::array(
        {coordinate(p.bbox->x1), coordinate(p.bbox->y1), coordinate(p.bbox->x2), coordinate(p.bbox->y2)});
  } else {
    payload["bbox"] = nullptr;
  }
  // '<' and '>' only occur inside JSON strings; \u escapes keep tag
  // look-alikes in the answer text from closing the block.
  std::string body;
  for (char c : payload.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace)) {
    if (c == '<') {
      body += "\\u003c";
    } else if (c == '>') {
      body += "\\u003e";
    } else {
      body += c;
    }
  }
  return "<think>" + escape_reasoning(p.reasoning) + "</think><answer>" + body + "</answer>";
}

std::optional<PredictionRecord> to_prediction(const std::string& id, const ParsedOutput& parsed,
                                              std::string_view raw) {
  const AnswerPayload& a = parsed.answer;
  if (!a.verdict || id.empty()) return std::nullopt;
  PredictionRecord rec;
  rec.id = id;
  rec.verdict = *a.verdict;
  rec.reasoning = parsed.think;
  rec.raw_output = std::string(raw);
  if (rec.verdict == Verdict::Tampered) {
    if (!a.method || !a.text || !a.bbox) return std::nullopt;
    rec.method = a.method;
    rec.text = a.text;
    rec.bbox = a.bbox;
  }
  return rec;
}

Json to_json(const ParsedOutput& p) {
  Json answer = Json::object();
  answer["verdict"] = p.answer.verdict ? Json(to_string(*p.answer.verdict)) : Json(nullptr);
  answer["method"] = p.answer.method ? Json(to_string(*p.answer.method)) : Json(nullptr);
  answer["text"] = p.answer.text ? Json(*p.answer.text) : Json(nullptr);
  answer["bbox"] = p.answer.bbox ? to_json(*p.answer.bbox) : Json(nullptr);
  return Json{{"think", p.think},
              {"answer_raw", p.answer_raw},
              {"answer", answer},
              {"tags_ok", p.tags_ok},
              {"payload_ok", p.payload_ok},
              {"format_ok", p.format_ok},
              {"diagnostics", p.diagnostics}};
}

}  // namespace textshield
