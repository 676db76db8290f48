#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <json.hpp>

#include "unirec/sdt/bpe.hpp"

namespace unirec::decode {

using sdt::TokenId;

// What a recognizer would condition on besides the prefix: the visual token
// count N and an opaque handle to the image features.
struct DecodeContext {
  std::size_t visual_tokens = 0;
  const void* features = nullptr;
};

// Next-token distribution over the whole vocabulary. `score` fills `out`
// with vocab_size() probabilities summing to 1 and must be a pure function of
// its inputs for the duration of one decode.
class NextTokenScorer {
 public:
  virtual ~NextTokenScorer() = default;
  virtual std::size_t vocab_size() const = 0;
  virtual void score(std::span<const TokenId> prefix, const DecodeContext& ctx, std::vector<double>& out) const = 0;
};

// Count-based n-gram model with additive smoothing. A context never seen in
// training yields the uniform distribution.
class NgramScorer final : public NextTokenScorer {
 public:
  NgramScorer(std::size_t vocab_size, std::size_t order = 3, double alpha = 1e-3);

  /// Adds every position of every sequence; sequences normally run from
  /// <BOS> to <EOS>, and <BOS> itself is never predicted.
  void fit(std::span<const std::vector<TokenId>> sequences);

  std::size_t vocab_size() const override { return vocab_size_; }
  std::size_t order() const noexcept { return order_; }
  double alpha() const noexcept { return alpha_; }
  void score(std::span<const TokenId> prefix, const DecodeContext& ctx, std::vector<double>& out) const override;

  nlohmann::json to_json() const;
  static NgramScorer from_json(const nlohmann::json& j);

 private:
  struct Counts {
    std::map<TokenId, std::uint64_t> next;
    std::uint64_t total = 0;
  };

  std::size_t vocab_size_;
  std::size_t order_;
  double alpha_;
  std::map<std::vector<TokenId>, Counts> table_;
};

// Mock recognizer that knows the answer, the reference sequence starting at
// <BOS>: for a prefix of length t it puts `confidence` on target[t] (or <EOS>
// past the end) and spreads the rest uniformly. With
// probability `error_rate`, drawn from (seed, t), the peak moves to another
// id instead. Stands in for a trained model in pipeline runs.
class OracleScorer final : public NextTokenScorer {
 public:
  OracleScorer(std::size_t vocab_size, std::vector<TokenId> target, TokenId eos, double error_rate,
               std::uint64_t seed, double confidence = 0.9);

  std::size_t vocab_size() const override { return vocab_size_; }
  void score(std::span<const TokenId> prefix, const DecodeContext& ctx, std::vector<double>& out) const override;

 private:
  std::size_t vocab_size_;
  std::vector<TokenId> target_;
  TokenId eos_;
  double error_rate_;
  std::uint64_t seed_;
  double confidence_;
};

}  // namespace unirec::decode
