#include "textshield/text_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/utf8.h>

namespace textshield {

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const int32_t length = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    out.push_back(c < 0 ? U'\uFFFD' : static_cast<char32_t>(c));
  }
  return out;
}

std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : s) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) {
      out += "\xEF\xBF\xBD";
    } else {
      out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
    }
  }
  return out;
}

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  // Shared prefix and suffix never contribute edits.
  while (!a.empty() && !b.empty() && a.front() == b.front()) {
    a.remove_prefix(1);
    b.remove_prefix(1);
  }
  while (!a.empty() && !b.empty() && a.back() == b.back()) {
    a.remove_suffix(1);
    b.remove_suffix(1);
  }
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return a.size();

  thread_local std::vector<std::size_t> row;
  row.resize(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    const char32_t ca = a[i - 1];
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t sub = diag + (ca == b[j - 1] ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, sub});
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(std::u32string_view(decode_utf8(a)), std::u32string_view(decode_utf8(b)));
}

double normed_levenshtein(std::u32string_view a, std::u32string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

double normed_levenshtein(std::string_view a, std::string_view b) {
  const auto ua = decode_utf8(a);
  const auto ub = decode_utf8(b);
  return normed_levenshtein(std::u32string_view(ua), std::u32string_view(ub));
}

namespace {

bool is_cjk(char32_t c) {
  UErrorCode status = U_ZERO_ERROR;
  const UScriptCode script = uscript_getScript(static_cast<UChar32>(c), &status);
  if (U_FAILURE(status)) return false;
  return script == USCRIPT_HAN || script == USCRIPT_HIRAGANA || script == USCRIPT_KATAKANA ||
         script == USCRIPT_HANGUL;
}

// Token ids shared by hyp and ref so n-grams compare as integer tuples.
struct Interned {
  std::vector<std::uint32_t> hyp;
  std::vector<std::uint32_t> ref;
};

Interned intern(const TokenSequence& hyp, const TokenSequence& ref) {
  std::unordered_map<std::string_view, std::uint32_t> ids;
  auto map = [&](const TokenSequence& seq) {
    std::vector<std::uint32_t> out;
    out.reserve(seq.size());
    for (const auto& t : seq.tokens) {
      auto [it, inserted] = ids.try_emplace(t, static_cast<std::uint32_t>(ids.size()));
      out.push_back(it->second);
    }
    return out;
  };
  Interned r;
  r.hyp = map(hyp);
  r.ref = map(ref);
  return r;
}

using NgramCounts = std::map<std::vector<std::uint32_t>, std::size_t>;

NgramCounts count_ngrams(const std::vector<std::uint32_t>& seq, std::size_t n) {
  NgramCounts counts;
  if (seq.size() < n) return counts;
  for (std::size_t i = 0; i + n <= seq.size(); ++i) {
    ++counts[std::vector<std::uint32_t>(seq.begin() + static_cast<std::ptrdiff_t>(i),
                                        seq.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

std::size_t lcs_length(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

TokenSequence tokenize(std::string_view text) {
  TokenSequence seq;
  std::u32string current;
  auto flush = [&] {
    if (!current.empty()) {
      seq.tokens.push_back(encode_utf8(current));
      current.clear();
    }
  };
  for (char32_t c : decode_utf8(text)) {
    if (u_isUWhiteSpace(static_cast<UChar32>(c))) {
      flush();
    } else if (is_cjk(c)) {
      flush();
      current.push_back(static_cast<char32_t>(u_tolower(static_cast<UChar32>(c))));
      flush();
    } else {
      current.push_back(static_cast<char32_t>(u_tolower(static_cast<UChar32>(c))));
    }
  }
  flush();
  return seq;
}

double bleu(const TokenSequence& hyp, const TokenSequence& ref, int max_n) {
  if (hyp.empty() || ref.empty()) throw EmptyInput("BLEU needs non-empty hypothesis and reference");
  if (max_n < 1) throw Error("BLEU max order must be at least 1");
  const Interned ids = intern(hyp, ref);
  double log_sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= max_n; ++n) {
    const auto un = static_cast<std::size_t>(n);
    if (ids.hyp.size() < un) break;
    const NgramCounts hyp_counts = count_ngrams(ids.hyp, un);
    const NgramCounts ref_counts = count_ngrams(ids.ref, un);
    std::size_t matched = 0;
    for (const auto& [gram, count] : hyp_counts) {
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) matched += std::min(count, it->second);
    }
    const double total = static_cast<double>(ids.hyp.size() - un + 1);
    const double numerator = matched == 0 ? kBleuEpsilon : static_cast<double>(matched);
    log_sum += std::log(numerator / total);
    ++orders;
  }
  const double hyp_len = static_cast<double>(hyp.size());
  const double ref_len = static_cast<double>(ref.size());
  const double brevity = hyp_len > ref_len ? 1.0 : std::exp(1.0 - ref_len / hyp_len);
  const double score = brevity * std::exp(log_sum / orders);
  return std::clamp(score, 0.0, 1.0);
}

double rouge_l(const TokenSequence& hyp, const TokenSequence& ref) {
  if (hyp.empty() || ref.empty()) throw EmptyInput("Rouge-L needs non-empty hypothesis and reference");
  const Interned ids = intern(hyp, ref);
  const std::size_t lcs = lcs_length(ids.hyp, ids.ref);
  if (lcs == 0) return 0.0;
  const double p = static_cast<double>(lcs) / static_cast<double>(hyp.size());
  const double r = static_cast<double>(lcs) / static_cast<double>(ref.size());
  return 2.0 * p * r / (p + r);
}

double cosine_sim(const TokenSequence& hyp, const TokenSequence& ref) {
  if (hyp.empty() || ref.empty()) return 0.0;
  const Interned ids = intern(hyp, ref);
  std::vector<double> hv, rv;
  for (auto id : ids.hyp) {
    if (id >= hv.size()) hv.resize(id + 1, 0.0);
    hv[id] += 1.0;
  }
  for (auto id : ids.ref) {
    if (id >= rv.size()) rv.resize(id + 1, 0.0);
    rv[id] += 1.0;
  }
  const std::size_t dim = std::max(hv.size(), rv.size());
  hv.resize(dim, 0.0);
  rv.resize(dim, 0.0);
  double dot = 0, hn = 0, rn = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    dot += hv[i] * rv[i];
    hn += hv[i] * hv[i];
    rn += rv[i] * rv[i];
  }
  if (hn == 0 || rn == 0) return 0.0;
  // sqrt of the product keeps identical vectors at exactly 1.
  return std::clamp(dot / std::sqrt(hn * rn), 0.0, 1.0);
}

}  // namespace textshield
