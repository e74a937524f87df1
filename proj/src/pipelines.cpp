#include "textshield/pipelines.hpp"

#include <fstream>
#include <iterator>
#include <unordered_map>

#include "textshield/jsonl.hpp"
#include "textshield/log.hpp"
#include "textshield/mask.hpp"
#include "textshield/output_parser.hpp"
#include "textshield/parallel.hpp"
#include "textshield/schema.hpp"

namespace textshield {

using OJson = nlohmann::ordered_json;

void require_input(const fs::path& p) {
  std::error_code ec;
  if (!fs::is_regular_file(p, ec)) throw IoError("input file not found: " + p.string());
}

void require_output(const fs::path& p) {
  std::error_code ec;
  const fs::path parent = p.parent_path();
  if (!parent.empty() && !fs::is_directory(parent, ec)) {
    throw IoError("output directory does not exist: " + parent.string());
  }
  if (fs::is_directory(p, ec)) throw IoError("output path is a directory: " + p.string());
}

namespace {

std::string ordered_jsonl(const std::vector<OJson>& lines) {
  std::string out;
  for (const auto& j : lines) {
    out += j.dump(-1, ' ', false, OJson::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

void throw_problems(const std::vector<std::string>& problems) {
  std::string msg = std::to_string(problems.size()) + " schema violation(s):";
  for (const auto& p : problems) msg += "\n  " + p;
  throw SchemaViolation(msg);
}

OJson opt_number(const std::optional<double>& v) { return v ? OJson(*v) : OJson(nullptr); }

}  // namespace

ParseSummary run_parse(const ParseJob& job) {
  require_input(job.input);
  require_output(job.output);
  require_output(job.diagnostics);
  const auto lines = read_jsonl(job.input);
  std::vector<std::string> problems;
  for (const auto& line : lines) {
    const std::string where = job.input.string() + ":" + std::to_string(line.line_no) + ": ";
    const Json& j = line.value;
    if (!j.is_object()) {
      problems.push_back(where + "expected a JSON object");
      continue;
    }
    if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty()) {
      problems.push_back(where + "id: expected a non-empty string");
    }
    if (!j.contains("raw") || !j["raw"].is_string()) problems.push_back(where + "raw: expected a string");
  }
  if (!problems.empty()) throw_problems(problems);

  struct Result {
    ParsedOutput parsed;
    std::optional<PredictionRecord> record;
  };
  std::vector<Result> results(lines.size());
  parallel_for(lines.size(), job.jobs, [&](std::size_t i) {
    const auto id = lines[i].value["id"].get<std::string>();
    const auto raw = lines[i].value["raw"].get<std::string>();
    results[i].parsed = parse_completion(raw);
    results[i].record = to_prediction(id, results[i].parsed, raw);
  });

  ParseSummary summary;
  summary.lines = lines.size();
  std::vector<Json> predictions;
  std::vector<OJson> diagnostics;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Result& r = results[i];
    if (r.record) predictions.push_back(to_json(*r.record));
    summary.emitted += r.record.has_value();
    summary.format_ok += r.parsed.format_ok;
    OJson d;
    d["id"] = lines[i].value["id"];
    d["line"] = lines[i].line_no;
    d["tags_ok"] = r.parsed.tags_ok;
    d["payload_ok"] = r.parsed.payload_ok;
    d["format_ok"] = r.parsed.format_ok;
    d["emitted"] = r.record.has_value();
    d["diagnostics"] = r.parsed.diagnostics;
    diagnostics.push_back(std::move(d));
  }
  write_file_atomic(job.output, to_jsonl(predictions));
  write_file_atomic(job.diagnostics, ordered_jsonl(diagnostics));
  logger().info("parse: {} lines, {} predictions, {} format-compliant", summary.lines, summary.emitted,
                summary.format_ok);
  return summary;
}

std::size_t run_reward(const RewardJob& job) {
  require_input(job.predictions);
  require_input(job.groundtruth);
  require_output(job.output);
  if (job.group_size && *job.group_size < 2) throw UsageError("--group-size must be at least 2");

  const auto gts = load_groundtruth(job.groundtruth);
  std::unordered_map<std::string, const GroundTruthRecord*> gt_by_id;
  for (const auto& g : gts) {
    if (!gt_by_id.emplace(g.id, &g).second) throw DataError("duplicate ground-truth id '" + g.id + "'");
  }

  const auto lines = read_jsonl(job.predictions);
  std::vector<ScoredCompletion> completions;
  completions.reserve(lines.size());
  std::vector<std::string> problems;
  for (const auto& line : lines) {
    const std::string where = job.predictions.string() + ":" + std::to_string(line.line_no) + ": ";
    const Json& j = line.value;
    const bool raw_form = j.is_object() && j.contains("raw") && !j.contains("verdict");
    if (raw_form) {
      if (!j.contains("id") || !j["id"].is_string() || !j["raw"].is_string()) {
        problems.push_back(where + "raw completions need string id and raw");
        continue;
      }
      completions.push_back(completion_from_parse(j["id"].get<std::string>(),
                                                  parse_completion(j["raw"].get<std::string>())));
      continue;
    }
    auto v = validate_prediction(j);
    if (!v) {
      for (const auto& e : v.errors()) problems.push_back(where + e.to_string());
      continue;
    }
    completions.push_back(completion_from_record(v.value()));
  }
  if (!problems.empty()) throw_problems(problems);

  std::vector<std::string> unknown;
  for (const auto& c : completions) {
    if (!gt_by_id.count(c.id)) unknown.push_back(c.id);
  }
  if (!unknown.empty()) {
    throw DataError(std::to_string(unknown.size()) + " prediction id(s) without ground truth, first '" +
                    unknown.front() + "'");
  }
  if (job.group_size && completions.size() % *job.group_size != 0) {
    throw DataError(std::to_string(completions.size()) + " completions do not split into groups of " +
                    std::to_string(*job.group_size));
  }

  std::vector<RewardVector> rewards(completions.size());
  parallel_for(completions.size(), job.jobs, [&](std::size_t i) {
    rewards[i] = reward_all(completions[i], *gt_by_id.at(completions[i].id), job.weights);
  });

  std::vector<double> advantages;
  if (job.group_size) {
    const std::size_t g = *job.group_size;
    advantages.reserve(rewards.size());
    for (std::size_t start = 0; start < rewards.size(); start += g) {
      std::vector<double> group;
      for (std::size_t k = start; k < start + g; ++k) group.push_back(rewards[k].composite);
      const auto a = group_advantages(group);
      advantages.insert(advantages.end(), a.begin(), a.end());
    }
  }

  std::vector<OJson> out;
  out.reserve(rewards.size());
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    const RewardVector& r = rewards[i];
    OJson j;
    j["id"] = completions[i].id;
    j["cls"] = r.cls;
    j["method"] = opt_number(r.method);
    j["loc"] = opt_number(r.loc);
    j["ocr"] = opt_number(r.ocr);
    j["format"] = r.format;
    j["composite"] = r.composite;
    if (job.group_size) {
      j["group"] = i / *job.group_size;
      j["advantage"] = advantages[i];
    }
    out.push_back(std::move(j));
  }
  write_file_atomic(job.output, ordered_jsonl(out));
  return rewards.size();
}

RectifySummary run_rectify(const RectifyJob& job) {
  require_input(job.predictions);
  require_input(job.ocr);
  require_output(job.output);
  if (job.audit) require_output(*job.audit);
  if (!(job.config.match_threshold >= 0.0 && job.config.match_threshold <= 1.0)) {
    throw UsageError("--threshold must lie in [0, 1]");
  }

  const auto preds = load_predictions(job.predictions);
  const auto layouts = load_ocr(job.ocr);
  std::unordered_map<std::string, OcrLayout> by_id;
  for (const auto& l : layouts) {
    if (!by_id.emplace(l.id, l).second) throw DataError("duplicate OCR layout id '" + l.id + "'");
  }

  const auto results = rectify_batch(preds, by_id, job.config, job.jobs);
  RectifySummary summary;
  summary.records = results.size();
  std::vector<Json> records;
  std::vector<OJson> audit;
  for (const auto& r : results) {
    records.push_back(to_json(r.record));
    if (r.outcome && r.outcome->source != RectifySource::KeptOriginal) ++summary.replaced;
    for (const auto& w : r.warnings) logger().warn("rectify: {}", w);
    summary.warnings += r.warnings.size();
    OJson a;
    a["id"] = r.record.id;
    if (r.outcome) {
      a["source"] = to_string(r.outcome->source);
      a["final_bbox"] = {r.outcome->final_bbox.x1, r.outcome->final_bbox.y1, r.outcome->final_bbox.x2,
                         r.outcome->final_bbox.y2};
      a["matched_index"] = r.outcome->matched_index ? OJson(*r.outcome->matched_index) : OJson(nullptr);
      a["match_distance"] = opt_number(r.outcome->match_distance);
    } else {
      a["source"] = "not_applicable";
    }
    a["warnings"] = r.warnings;
    audit.push_back(std::move(a));
  }
  write_file_atomic(job.output, to_jsonl(records));
  if (job.audit) write_file_atomic(*job.audit, ordered_jsonl(audit));
  logger().info("rectify: {} records, {} boxes replaced", summary.records, summary.replaced);
  return summary;
}

std::string run_evaluate(const EvaluateJob& job) {
  require_input(job.groundtruth);
  require_input(job.predictions);
  if (job.output) require_output(*job.output);

  const auto gts = load_groundtruth(job.groundtruth);
  const auto preds = load_predictions(job.predictions);
  EvalOptions options;
  options.denominator = job.denominator;
  options.jobs = job.jobs;
  options.label = job.rectified ? job.label + " + OCR rect." : job.label;
  const MetricReport report = evaluate(preds, gts, options);
  for (const auto& w : report.warnings) logger().warn("evaluate: {}", w);
  if (job.max_unmatched && report.unmatched_prediction_ids.size() > *job.max_unmatched) {
    throw DataError(std::to_string(report.unmatched_prediction_ids.size()) +
                    " unmatched prediction id(s) exceed the budget of " + std::to_string(*job.max_unmatched));
  }
  std::string text = emit_report(report, job.format);
  if (job.output) write_file_atomic(*job.output, text);
  return text;
}

void run_fixtures(const FixtureParams& params, const fs::path& out_dir) {
  std::error_code ec;
  if (!fs::is_directory(out_dir, ec)) throw IoError("output directory does not exist: " + out_dir.string());
  write_fixtures(generate_fixtures(params), out_dir);
}

std::string run_mask_encode(const fs::path& input) {
  require_input(input);
  std::ifstream f(input, std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (bytes.starts_with("P5") || bytes.starts_with("P2")) return encode_mask_string(read_pgm(input));
  const auto first = bytes.find_first_not_of(" \t\r\n");
  const auto last = bytes.find_last_not_of(" \t\r\n");
  const std::string_view body =
      first == std::string::npos ? std::string_view() : std::string_view(bytes).substr(first, last - first + 1);
  return encode_mask_string(decode_mask_string(body));
}

void run_mask_decode(std::string_view mask_string, const fs::path& output) {
  require_output(output);
  write_file_atomic(output, render_pgm(decode_mask_string(mask_string)));
}

}  // namespace textshield
