#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "textshield/types.hpp"

namespace textshield {

class EmptyInput : public Error {
 public:
  using Error::Error;
};

/// UTF-8 to code points. Ill-formed sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

/// Edit distance in code points (insert/delete/substitute, unit costs).
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein(std::string_view a, std::string_view b);

/// levenshtein / max(|a|,|b|) in code points; 0 when both are empty.
double normed_levenshtein(std::string_view a, std::string_view b);
double normed_levenshtein(std::u32string_view a, std::u32string_view b);

struct TokenSequence {
  std::vector<std::string> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

/// Whitespace split, then every Han/Hiragana/Katakana/Hangul code point is
/// its own token; lowercased with simple per-code-point case mapping.
TokenSequence tokenize(std::string_view text);

inline constexpr double kBleuEpsilon = 1e-9;

/// Sentence BLEU, uniform weights over orders 1..max_n, brevity penalty.
/// Zero match counts are replaced by kBleuEpsilon; orders longer than the
/// hypothesis are skipped. Throws EmptyInput.
double bleu(const TokenSequence& hyp, const TokenSequence& ref, int max_n = 4);

/// LCS-based F1. Throws EmptyInput.
double rouge_l(const TokenSequence& hyp, const TokenSequence& ref);

/// Cosine of term-frequency vectors; 0 when either side is empty.
double cosine_sim(const TokenSequence& hyp, const TokenSequence& ref);

/// Pluggable text similarity for the reasoning score's cosine term.
class SimilarityProvider {
 public:
  virtual ~SimilarityProvider() = default;
  virtual double similarity(const TokenSequence& hyp, const TokenSequence& ref) const = 0;
};

class TermFrequencyCosine final : public SimilarityProvider {
 public:
  double similarity(const TokenSequence& hyp, const TokenSequence& ref) const override {
    return cosine_sim(hyp, ref);
  }
};

}  // namespace textshield
