#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "test_util.hpp"
#include "unirec/core/error.hpp"
#include "unirec/core/limits.hpp"
#include "unirec/decode/geometry.hpp"
#include "unirec/decode/greedy.hpp"
#include "unirec/decode/scorer.hpp"
#include "unirec/sdt/vocabulary.hpp"

namespace unirec::decode {
namespace {

// 256 byte tokens plus the reserved block; one id per byte.
const sdt::DecoupledVocabulary& vocab() {
  static const sdt::DecoupledVocabulary v =
      sdt::DecoupledVocabulary::coupled(sdt::BpeModel::byte_level(sdt::TokenModality::Text, {}));
  return v;
}

// Puts all mass on one id regardless of the prefix.
class PeakScorer final : public NextTokenScorer {
 public:
  PeakScorer(std::size_t v, TokenId peak) : v_(v), peak_(peak) {}
  std::size_t vocab_size() const override { return v_; }
  void score(std::span<const TokenId>, const DecodeContext&, std::vector<double>& out) const override {
    out.assign(v_, 0.0);
    out[peak_] = 1.0;
  }

 private:
  std::size_t v_;
  TokenId peak_;
};

// Behaves at every step except `bad_step`, where it breaks the contract.
class FaultyScorer final : public NextTokenScorer {
 public:
  enum class Fault { Length, Sum, Negative, NaN };
  FaultyScorer(std::size_t v, std::size_t bad_step, Fault fault) : v_(v), bad_(bad_step), fault_(fault) {}
  std::size_t vocab_size() const override { return v_; }
  void score(std::span<const TokenId> prefix, const DecodeContext&, std::vector<double>& out) const override {
    out.assign(v_, 1.0 / static_cast<double>(v_));
    if (prefix.size() - 1 != bad_) return;
    switch (fault_) {
      case Fault::Length: out.pop_back(); break;
      case Fault::Sum: out[0] += 0.01; break;
      case Fault::Negative: out[0] = -out[0]; out[1] += 2 * out[1]; break;
      case Fault::NaN: out[3] = std::nan(""); break;
    }
  }

 private:
  std::size_t v_;
  std::size_t bad_;
  Fault fault_;
};

std::string error_of(const NextTokenScorer& s) {
  try {
    greedy_decode(s, vocab());
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(FitGeometry, Examples) {
  const GeometrySpec g = fit_geometry(2816, 1920);
  EXPECT_EQ(g.scaled_h, 1408);
  EXPECT_EQ(g.scaled_w, 960);
  EXPECT_EQ(g.padded_h, 1408);
  EXPECT_EQ(g.padded_w, 960);
  EXPECT_EQ(g.grid_h, 44);
  EXPECT_EQ(g.grid_w, 30);
  EXPECT_EQ(g.tokens, 1320);
  EXPECT_EQ(g.feature_dim, 768);

  const GeometrySpec unit = fit_geometry(32, 32);
  EXPECT_EQ(unit.padded_h, 32);
  EXPECT_EQ(unit.tokens, 1);

  const GeometrySpec odd = fit_geometry(33, 33);
  EXPECT_EQ(odd.scaled_h, 33);
  EXPECT_EQ(odd.padded_h, 64);
  EXPECT_EQ(odd.padded_w, 64);
  EXPECT_EQ(odd.tokens, 4);
}

TEST(FitGeometry, RoundingAndTinySides) {
  // 1920x1000 (wide): scale 960/1000, height 1843.2 -> capped by 1408/1920.
  const GeometrySpec g = fit_geometry(1920, 1000);
  EXPECT_EQ(g.scaled_h, 1408);
  EXPECT_EQ(g.scaled_w, 733);  // 1000 * 1408 / 1920 = 733.33
  EXPECT_EQ(g.padded_w, 736);
  const GeometrySpec half = fit_geometry(1, 1920);  // 0.5 rounds up
  EXPECT_EQ(half.scaled_w, 960);
  EXPECT_EQ(half.scaled_h, 1);
  const GeometrySpec sliver = fit_geometry(1, 100000);
  EXPECT_EQ(sliver.scaled_h, 1);
  EXPECT_EQ(sliver.scaled_w, 960);
}

TEST(FitGeometry, InvariantsOnRandomSizes) {
  Rng rng(101);
  for (int i = 0; i < 10000; ++i) {
    const std::int64_t h = rng.between(1, rng.below(2) == 0 ? 3000 : 100000);
    const std::int64_t w = rng.between(1, rng.below(2) == 0 ? 3000 : 100000);
    const GeometrySpec g = fit_geometry(h, w);
    ASSERT_LE(g.scaled_h, h);
    ASSERT_LE(g.scaled_w, w);
    ASSERT_LE(g.padded_h, kMaxHeight);
    ASSERT_LE(g.padded_w, kMaxWidth);
    ASSERT_EQ(g.padded_h % kPatch, 0);
    ASSERT_EQ(g.padded_w % kPatch, 0);
    ASSERT_LT(g.padded_h - g.scaled_h, kPatch);
    ASSERT_LT(g.padded_w - g.scaled_w, kPatch);
    ASSERT_EQ(g.tokens, (g.padded_h / kPatch) * (g.padded_w / kPatch));
    if (h <= kMaxHeight && w <= kMaxWidth) {
      ASSERT_EQ(g.scaled_h, h);
      ASSERT_EQ(g.scaled_w, w);
    } else {
      ASSERT_TRUE(g.scaled_h == kMaxHeight || g.scaled_w == kMaxWidth) << h << "x" << w;
    }
    // Both sides use one scale, each rounded to the nearest pixel (or 1).
    const long double scale = std::min({1.0L, static_cast<long double>(kMaxWidth) / w,
                                        static_cast<long double>(kMaxHeight) / h});
    if (g.scaled_h > 1) {
      ASSERT_LE(std::fabs(g.scaled_h - scale * h), 0.5L + 1e-9L) << h << "x" << w;
    }
    if (g.scaled_w > 1) {
      ASSERT_LE(std::fabs(g.scaled_w - scale * w), 0.5L + 1e-9L) << h << "x" << w;
    }
  }
}

TEST(FitGeometry, RejectsBadSizes) {
  EXPECT_THROW(fit_geometry(0, 10), Error);
  EXPECT_THROW(fit_geometry(10, -1), Error);
  const auto j = to_json(fit_geometry(2816, 1920));
  EXPECT_EQ(j.at("N"), 1320);
  EXPECT_EQ(j.at("D"), 768);
}

TEST(GreedyDecode, AlwaysEosStopsImmediately) {
  const PeakScorer s(vocab().size(), vocab().eos());
  EXPECT_EQ(greedy_decode(s, vocab()), (std::vector<TokenId>{vocab().bos(), vocab().eos()}));
}

TEST(GreedyDecode, NeverEosStopsAtBudget) {
  const PeakScorer s(vocab().size(), 'a');
  const auto ids = greedy_decode(s, vocab());
  EXPECT_EQ(ids.size(), kMaxTokenLength);
  EXPECT_EQ(ids.size(), 1024u);
  EXPECT_EQ(ids.front(), vocab().bos());
  EXPECT_EQ(ids.back(), static_cast<TokenId>('a'));
  EXPECT_EQ(greedy_decode(s, vocab(), 5).size(), 5u);
  EXPECT_EQ(greedy_decode(s, vocab(), 1), (std::vector<TokenId>{vocab().bos()}));
  EXPECT_THROW(greedy_decode(s, vocab(), 0), Error);
}

TEST(GreedyDecode, TrigramReproducesTrainingString) {
  NgramScorer s(vocab().size(), 3);
  const std::vector<std::vector<TokenId>> train{vocab().encode("abc")};
  s.fit(train);
  const auto ids = greedy_decode(s, vocab());
  EXPECT_EQ(ids, train[0]);
  EXPECT_EQ(vocab().decode(ids), "abc");
  EXPECT_EQ(greedy_decode(s, vocab()), ids);
}

TEST(GreedyDecode, NgramReproducesLongerStrings) {
  for (const char* text : {"hello world", "数学 $x^2$", "abcabd"}) {
    NgramScorer s(vocab().size(), 4);
    const std::vector<std::vector<TokenId>> train{vocab().encode(text)};
    s.fit(train);
    EXPECT_EQ(vocab().decode(greedy_decode(s, vocab())), text);
  }
}

TEST(GreedyDecode, TiesGoToLowestId) {
  // An unfitted model is uniform, so the argmax is id 0.
  const NgramScorer s(vocab().size(), 2);
  const auto ids = greedy_decode(s, vocab(), 3);
  EXPECT_EQ(ids, (std::vector<TokenId>{vocab().bos(), 0, 0}));
}

TEST(GreedyDecode, ContractViolationsNameTheStep) {
  const std::size_t v = vocab().size();
  using F = FaultyScorer::Fault;
  EXPECT_NE(error_of(FaultyScorer(v, 3, F::Length)).find("step 3 has 260 entries, expected 261"), std::string::npos);
  EXPECT_NE(error_of(FaultyScorer(v, 0, F::Sum)).find("step 0 sums to"), std::string::npos);
  EXPECT_NE(error_of(FaultyScorer(v, 7, F::Negative)).find("step 7 has a negative entry"), std::string::npos);
  EXPECT_NE(error_of(FaultyScorer(v, 2, F::NaN)).find("step 2 has a non-finite entry"), std::string::npos);
  EXPECT_NE(error_of(PeakScorer(v + 1, 0)).find("scorer covers 262 tokens"), std::string::npos);
}

TEST(SequenceLoss, ClosedForms) {
  const std::vector<std::vector<double>> one_hot{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}};
  const std::vector<TokenId> targets{1, 0, 2};
  EXPECT_EQ(sequence_loss(one_hot, targets), (SequenceLoss{0.0, false}));

  const std::vector<std::vector<double>> uniform(3, std::vector<double>(4, 0.25));
  const std::vector<TokenId> any{0, 3, 1};
  const SequenceLoss u = sequence_loss(uniform, any);
  EXPECT_NEAR(u.value, 3.0 * std::log(4.0), 1e-12);
  EXPECT_NEAR(u.value, 4.1589, 1e-4);
  EXPECT_FALSE(u.infinite);

  const std::vector<TokenId> miss{1, 1, 2};
  const SequenceLoss inf = sequence_loss(one_hot, miss);
  EXPECT_TRUE(inf.infinite);
  EXPECT_TRUE(std::isinf(inf.value));

  EXPECT_THROW(sequence_loss(one_hot, std::vector<TokenId>{1}), Error);
  EXPECT_THROW(sequence_loss(one_hot, std::vector<TokenId>{1, 0, 9}), Error);
}

TEST(SequenceLoss, GreedyOutputIsLocallyOptimal) {
  Rng rng(102);
  for (int trial = 0; trial < 20; ++trial) {
    NgramScorer s(vocab().size(), 2 + rng.below(3));
    std::vector<std::vector<TokenId>> train;
    for (int k = 0; k < 3; ++k) train.push_back(vocab().encode(testing::random_mixed(rng, 8)));
    s.fit(train);
    const DecodeTrace trace = greedy_decode_traced(s, vocab(), 64);
    ASSERT_EQ(trace.steps.size() + 1, trace.ids.size());
    const std::span<const TokenId> targets(trace.ids.begin() + 1, trace.ids.end());
    ASSERT_EQ(trace.steps, teacher_forced(s, trace.ids));
    const SequenceLoss best = sequence_loss(trace.steps, targets);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      std::vector<TokenId> perturbed(targets.begin(), targets.end());
      perturbed[t] = static_cast<TokenId>((perturbed[t] + 1 + rng.below(vocab().size() - 1)) % vocab().size());
      ASSERT_LE(best.value, sequence_loss(trace.steps, perturbed).value);
    }
  }
}

TEST(OracleScorer, ReproducesTargetWithoutErrors) {
  const auto target = vocab().encode("recognized text");
  const OracleScorer s(vocab().size(), target, vocab().eos(), 0.0, 1);
  const DecodeTrace trace = greedy_decode_traced(s, vocab());
  EXPECT_EQ(trace.ids, target);
  // Its distribution depends only on the position, so any single-token
  // change of the output costs loss under teacher forcing too.
  const std::span<const TokenId> targets(trace.ids.begin() + 1, trace.ids.end());
  const SequenceLoss best = sequence_loss(teacher_forced(s, trace.ids), targets);
  for (std::size_t t = 1; t + 1 < trace.ids.size(); ++t) {
    auto changed = trace.ids;
    changed[t] = changed[t] == 'q' ? 'z' : 'q';
    const std::span<const TokenId> ct(changed.begin() + 1, changed.end());
    ASSERT_LT(best.value, sequence_loss(teacher_forced(s, changed), ct).value);
  }
}

TEST(OracleScorer, ErrorRateIntroducesDeterministicMistakes) {
  const auto target = vocab().encode(std::string(200, 'a'));
  const OracleScorer s(vocab().size(), target, vocab().eos(), 0.2, 7);
  const auto a = greedy_decode(s, vocab());
  EXPECT_EQ(a, greedy_decode(OracleScorer(vocab().size(), target, vocab().eos(), 0.2, 7), vocab()));
  EXPECT_NE(a, target);
  EXPECT_NE(a, greedy_decode(OracleScorer(vocab().size(), target, vocab().eos(), 0.2, 8), vocab()));
}

TEST(NgramScorer, JsonRoundTripAndNormalization) {
  NgramScorer s(vocab().size(), 3, 0.01);
  const std::vector<std::vector<TokenId>> train{vocab().encode("abcab"), vocab().encode("bca")};
  s.fit(train);
  const NgramScorer back = NgramScorer::from_json(s.to_json());
  EXPECT_EQ(back.to_json(), s.to_json());
  EXPECT_EQ(back.order(), 3u);
  std::vector<double> p;
  const std::vector<TokenId> prefix{vocab().bos(), 'a'};
  back.score(prefix, {}, p);
  double sum = 0;
  for (double x : p) sum += x;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_EQ(std::max_element(p.begin(), p.end()) - p.begin(), 'b');
  EXPECT_THROW(NgramScorer(vocab().size(), 0), Error);
  EXPECT_THROW(NgramScorer::from_json(nlohmann::json{{"kind", "oracle"}}), Error);
}

}  // namespace
}  // namespace unirec::decode
