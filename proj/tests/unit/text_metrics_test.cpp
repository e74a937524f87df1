#include <gtest/gtest.h>

#include <random>

#include "textshield/text_metrics.hpp"

namespace textshield {
namespace {

TokenSequence toks(std::initializer_list<const char*> t) {
  TokenSequence s;
  for (const char* x : t) s.tokens.emplace_back(x);
  return s;
}

TEST(Utf8, DecodeEncode) {
  EXPECT_EQ(decode_utf8("a发"), (std::u32string{U'a', U'发'}));
  EXPECT_EQ(encode_utf8(U"票x"), "票x");
  EXPECT_EQ(decode_utf8("\xff"), std::u32string(1, U'�'));
}

TEST(Levenshtein, Basics) {
  EXPECT_EQ(levenshtein(std::string_view("abc"), std::string_view("abc")), 0u);
  EXPECT_EQ(levenshtein(std::string_view(""), std::string_view("abc")), 3u);
  EXPECT_EQ(levenshtein(std::string_view("abc"), std::string_view("")), 3u);
  EXPECT_EQ(levenshtein(std::string_view("发票"), std::string_view("发栗")), 1u);
  EXPECT_EQ(levenshtein(std::string_view("flaw"), std::string_view("lawn")), 2u);
}

TEST(NormedLevenshtein, Conventions) {
  EXPECT_EQ(normed_levenshtein(std::string_view(""), std::string_view("")), 0.0);
  EXPECT_EQ(normed_levenshtein(std::string_view("x"), std::string_view("x")), 0.0);
  EXPECT_EQ(normed_levenshtein(std::string_view("ab"), std::string_view("")), 1.0);
  // Code points, not bytes.
  EXPECT_DOUBLE_EQ(normed_levenshtein(std::string_view("发票"), std::string_view("发")), 0.5);
}

TEST(Tokenize, Rules) {
  EXPECT_EQ(tokenize("The cat"), toks({"the", "cat"}));
  EXPECT_EQ(tokenize("发票金额"), toks({"发", "票", "金", "额"}));
  EXPECT_EQ(tokenize("Total: 100"), toks({"total:", "100"}));
  EXPECT_EQ(tokenize("  a\t\nb  "), toks({"a", "b"}));
  EXPECT_EQ(tokenize("Invoice发票No"), toks({"invoice", "发", "票", "no"}));
  EXPECT_EQ(tokenize("ひらがなカ 한국"), toks({"ひ", "ら", "が", "な", "カ", "한", "국"}));
  EXPECT_EQ(tokenize("ÉCOLE"), toks({"école"}));
  EXPECT_TRUE(tokenize("   ").empty());
}

TEST(Bleu, IdentityAndDisjoint) {
  const auto s = toks({"a", "b", "c", "d", "e"});
  EXPECT_DOUBLE_EQ(bleu(s, s), 1.0);
  EXPECT_DOUBLE_EQ(bleu(toks({"x"}), toks({"x"})), 1.0);
  EXPECT_LT(bleu(toks({"a", "b", "c"}), toks({"x", "y", "z"})), 1e-2);
  EXPECT_THROW(bleu(TokenSequence{}, s), EmptyInput);
  EXPECT_THROW(bleu(s, TokenSequence{}), EmptyInput);
}

TEST(Bleu, ClippedCounts) {
  // p1 = 2/4 after clipping "the" to one occurrence.
  const double v = bleu(toks({"the", "the", "the", "the"}), toks({"the", "cat", "on", "mat"}), 1);
  EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(RougeL, Cases) {
  EXPECT_DOUBLE_EQ(rouge_l(toks({"a", "b"}), toks({"a", "b"})), 1.0);
  EXPECT_EQ(rouge_l(toks({"a"}), toks({"b"})), 0.0);
  EXPECT_THROW(rouge_l(TokenSequence{}, toks({"a"})), EmptyInput);
}

TEST(Cosine, Cases) {
  EXPECT_DOUBLE_EQ(cosine_sim(toks({"a", "b", "a"}), toks({"b", "a", "a"})), 1.0);
  EXPECT_EQ(cosine_sim(toks({"a"}), toks({"b"})), 0.0);
  EXPECT_EQ(cosine_sim(TokenSequence{}, toks({"b"})), 0.0);
  const TermFrequencyCosine provider;
  EXPECT_DOUBLE_EQ(provider.similarity(toks({"a", "b"}), toks({"a", "c"})), 0.5);
}

TEST(Metrics, RandomBoundsAndSymmetry) {
  std::mt19937_64 rng(21);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f"};
  for (int i = 0; i < 2000; ++i) {
    TokenSequence h, r;
    for (std::size_t k = 0, n = 1 + rng() % 8; k < n; ++k) h.tokens.push_back(vocab[rng() % vocab.size()]);
    for (std::size_t k = 0, n = 1 + rng() % 8; k < n; ++k) r.tokens.push_back(vocab[rng() % vocab.size()]);
    const double b = bleu(h, r), rl = rouge_l(h, r), c = cosine_sim(h, r);
    EXPECT_GE(b, 0.0);
    EXPECT_LE(b, 1.0);
    EXPECT_GE(rl, 0.0);
    EXPECT_LE(rl, 1.0);
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
    EXPECT_DOUBLE_EQ(rl, rouge_l(r, h));
    EXPECT_DOUBLE_EQ(c, cosine_sim(r, h));
  }
}

}  // namespace
}  // namespace textshield
