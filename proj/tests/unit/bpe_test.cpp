#include <gtest/gtest.h>

#include <map>
#include <set>
#include <tuple>

#include "test_util.hpp"
#include "unirec/core/error.hpp"
#include "unirec/sdt/bpe.hpp"
#include "unirec/sdt/byte_alphabet.hpp"
#include "unirec/sdt/pretokenize.hpp"
#include "unirec/sdt/specials.hpp"

namespace unirec::sdt {
namespace {

constexpr std::size_t kAlphabet = 256;

// Brute-force trainer: every step recounts every adjacent pair of every
// chunk occurrence, with the same selection order as the library.
std::vector<MergePair> oracle_merges(const std::vector<std::string>& corpus, std::size_t target) {
  std::vector<std::vector<std::string>> chunks;
  for (const std::string& line : corpus) {
    for (const SpecialSplit& piece : split_specials(line, kReservedSpecials)) {
      if (piece.special >= 0) continue;
      for (std::string_view c : pretokenize(piece.text)) {
        std::vector<std::string> syms;
        for (char b : c) syms.push_back(byte_symbols()[static_cast<unsigned char>(b)]);
        chunks.push_back(std::move(syms));
      }
    }
  }
  std::set<std::string> vocab(byte_symbols().begin(), byte_symbols().end());
  std::vector<MergePair> merges;
  while (vocab.size() < target) {
    std::map<std::pair<std::string, std::string>, std::size_t> counts;
    for (const auto& c : chunks) {
      for (std::size_t i = 0; i + 1 < c.size(); ++i) ++counts[{c[i], c[i + 1]}];
    }
    const std::pair<std::string, std::string>* best = nullptr;
    std::size_t best_n = 0;
    for (const auto& [pair, n] : counts) {
      if (n < 2) continue;
      if (best == nullptr || n > best_n ||
          (n == best_n && std::make_tuple(pair.first + pair.second, pair.first) <
                              std::make_tuple(best->first + best->second, best->first))) {
        best = &pair;
        best_n = n;
      }
    }
    if (best == nullptr) break;
    const MergePair m{best->first, best->second};
    merges.push_back(m);
    vocab.insert(m.left + m.right);
    for (auto& c : chunks) {
      std::vector<std::string> next;
      for (std::size_t i = 0; i < c.size();) {
        if (i + 1 < c.size() && c[i] == m.left && c[i + 1] == m.right) {
          next.push_back(m.left + m.right);
          i += 2;
        } else {
          next.push_back(c[i++]);
        }
      }
      c = std::move(next);
    }
  }
  return merges;
}

TEST(TrainBpe, FirstMergeOfRepeatedByte) {
  const std::vector<std::string> corpus{"aaab"};
  const BpeModel m = train_bpe(corpus, kAlphabet + 1, TokenModality::Text);
  ASSERT_EQ(m.merges().size(), 1u);
  EXPECT_EQ(m.merges()[0], (MergePair{"a", "a"}));
  EXPECT_TRUE(m.find("aa").has_value());
  EXPECT_EQ(m.size(), kAlphabet + 1);
}

TEST(TrainBpe, NoRepeatedPairMeansNoMerges) {
  const std::vector<std::string> corpus{"x"};
  const BpeModel m = train_bpe(corpus, kAlphabet + 10, TokenModality::Text);
  EXPECT_TRUE(m.merges().empty());
  EXPECT_EQ(m.size(), kAlphabet);
}

TEST(TrainBpe, LearnsLatexCommands) {
  std::vector<std::string> corpus;
  for (int i = 0; i < 20; ++i) corpus.push_back("$\\sum_{i=1}^{n} x_i + \\sum_j y_j$");
  const BpeModel m = train_bpe(corpus, kAlphabet + 60, TokenModality::Formula);
  EXPECT_TRUE(m.find("\\sum").has_value());
  EXPECT_EQ(m.vocab()[*m.find("\\sum")].modality, TokenModality::Formula);
}

TEST(TrainBpe, Errors) {
  const std::vector<std::string> none;
  EXPECT_THROW(
      {
        try {
          train_bpe(none, 300, TokenModality::Text);
        } catch (const Error& e) {
          EXPECT_STREQ(e.what(), "empty corpus");
          throw;
        }
      },
      Error);
  const std::vector<std::string> one{"abc"};
  EXPECT_THROW(
      {
        try {
          train_bpe(one, 255, TokenModality::Text);
        } catch (const Error& e) {
          EXPECT_STREQ(e.what(), "vocab too small");
          throw;
        }
      },
      Error);
  EXPECT_NO_THROW(train_bpe(one, 256, TokenModality::Text));
}

TEST(TrainBpe, TieBreakIsLexicographicOnConcatenation) {
  // "ab" and "cd" both occur twice; "ab" < "cd".
  const std::vector<std::string> corpus{"ab cd", "ab cd"};
  const BpeModel m = train_bpe(corpus, kAlphabet + 1, TokenModality::Text);
  ASSERT_EQ(m.merges().size(), 1u);
  EXPECT_EQ(m.merges()[0], (MergePair{"a", "b"}));
}

TEST(TrainBpe, MatchesBruteForceOracle) {
  Rng rng(21);
  static const char* kWords[] = {"sum", "left", "right", "frac", "a", "ab", "数学", "x^2", "\\sum", "{", "}", "12"};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::string> corpus;
    const auto lines = 1 + rng.below(8);
    for (std::uint64_t l = 0; l < lines; ++l) {
      std::string line;
      const auto words = 1 + rng.below(8);
      for (std::uint64_t w = 0; w < words; ++w) {
        if (w > 0 && rng.below(3) != 0) line += ' ';
        line += rng.pick(kWords);
      }
      if (rng.below(4) == 0) line += std::string(kLineBreak);
      corpus.push_back(line);
    }
    const std::size_t target = kAlphabet + static_cast<std::size_t>(rng.below(40));
    const BpeModel m = train_bpe(corpus, target, TokenModality::Text);
    ASSERT_EQ(m.merges(), oracle_merges(corpus, target)) << "trial " << trial;
    ASSERT_LE(m.size(), target);
  }
}

TEST(TrainBpe, ReservedSpecialsNeverLearned) {
  std::vector<std::string> corpus(10, "a<|ln|>b<|pn|>");
  const BpeModel m = train_bpe(corpus, kAlphabet + 50, TokenModality::Text);
  for (const TokenEntry& e : m.vocab()) {
    EXPECT_EQ(e.surface.find("|ln|"), std::string::npos);
    EXPECT_EQ(e.surface.find("|pn|"), std::string::npos);
  }
}

TEST(TrainBpe, DeterministicSerialization) {
  const std::vector<std::string> corpus{"the sum of the sums", "left right left", "数学 公式 数学"};
  const auto a = train_bpe(corpus, 300, TokenModality::Text).to_json().dump();
  const auto b = train_bpe(corpus, 300, TokenModality::Text).to_json().dump();
  EXPECT_EQ(a, b);
}

TEST(BpeModel, EncodeAppliesMergesAndCoversAllBytes) {
  const std::vector<std::string> corpus{"hello hello hello world"};
  const BpeModel m = train_bpe(corpus, 280, TokenModality::Text);
  const auto ids = m.encode("hello");
  ASSERT_EQ(ids.size(), 1u);
  EXPECT_EQ(m.vocab()[ids[0]].surface, "hello");
  std::string all;
  for (int b = 0; b < 256; ++b) all.push_back(static_cast<char>(b));
  std::string back;
  for (TokenId id : m.encode(all)) back += *symbols_to_bytes(m.vocab()[id].surface);
  EXPECT_EQ(back, all);
}

TEST(BpeModel, JsonRoundTrip) {
  const std::vector<std::string> corpus{"aaab aaab", "$\\frac{a}{b}$"};
  const BpeModel m = train_bpe(corpus, 270, TokenModality::Formula);
  const BpeModel back = BpeModel::from_json(m.to_json());
  EXPECT_EQ(back.to_json(), m.to_json());
  EXPECT_TRUE(back.is_byte_level());
  EXPECT_EQ(back.frequency(*back.find("a")), m.frequency(*m.find("a")));
}

TEST(BpeModel, ValidationRejectsBrokenModels) {
  EXPECT_THROW(BpeModel(TokenModality::Text, {"a"}, {}, {"a", "a"}), Error);
  EXPECT_THROW(BpeModel(TokenModality::Text, {"a"}, {{"a", "b"}}, {"a", "ab"}), Error);
  EXPECT_THROW(BpeModel(TokenModality::Text, {"z"}, {}, {"a"}), Error);
  const BpeModel custom(TokenModality::Text, {"the", "sum"}, {}, {"the", "sum"});
  EXPECT_FALSE(custom.is_byte_level());
  EXPECT_THROW(custom.encode("the"), Error);
  nlohmann::json j = train_bpe(std::vector<std::string>{"ab ab"}, 257, TokenModality::Text).to_json();
  j["tokens"][3]["id"] = 7;
  EXPECT_THROW(BpeModel::from_json(j), Error);
}

TEST(Pretokenize, SplitsCommandsWordsDigitsAndPunctuation) {
  const auto chunks = pretokenize("the \\frac{12}{x}  ok");
  const std::vector<std::string_view> expected{"the", " ", "\\frac", "{", "12", "}{", "x", "}", " ", " ok"};
  EXPECT_EQ(chunks, expected);
}

TEST(Pretokenize, ControlWordsNeverTakeTheSpace) {
  const std::vector<std::string_view> expected{"a", "  ", "\\left", "(", " ", "\\right", ")"};
  EXPECT_EQ(pretokenize("a  \\left( \\right)"), expected);
}

TEST(Pretokenize, ConcatenationIsLossless) {
  Rng rng(22);
  for (int i = 0; i < 200; ++i) {
    std::string s;
    const auto n = rng.below(30);
    for (std::uint64_t k = 0; k < n; ++k) s.push_back(static_cast<char>(rng.below(256)));
    std::string joined;
    for (auto c : pretokenize(s)) joined += c;
    ASSERT_EQ(joined, s);
  }
}

TEST(ByteAlphabet, PrintableAndInvertible) {
  EXPECT_EQ(byte_symbols()[' '], "Ġ");
  EXPECT_EQ(byte_symbols()['a'], "a");
  std::set<std::string> distinct(byte_symbols().begin(), byte_symbols().end());
  EXPECT_EQ(distinct.size(), 256u);
  std::string all;
  for (int b = 0; b < 256; ++b) all.push_back(static_cast<char>(b));
  EXPECT_EQ(symbols_to_bytes(bytes_to_symbols(all)), all);
  EXPECT_FALSE(symbols_to_bytes("数").has_value());
}

}  // namespace
}  // namespace unirec::sdt
