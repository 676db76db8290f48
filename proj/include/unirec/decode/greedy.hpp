#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "unirec/core/limits.hpp"
#include "unirec/decode/scorer.hpp"
#include "unirec/sdt/vocabulary.hpp"

namespace unirec::decode {

// Tolerance on the sum of a scorer's output.
inline constexpr double kProbabilityTolerance = 1e-9;

struct DecodeTrace {
  std::vector<TokenId> ids;                 // <BOS> first
  std::vector<std::vector<double>> steps;   // steps[t] produced ids[t + 1]
};

/// Starts from [<BOS>] and appends the argmax of each scorer output (lowest
/// id on ties) until <EOS> is emitted or the sequence holds `max_len` ids.
/// Throws Error naming the step if an output has the wrong length, a
/// non-finite or negative entry, or a sum off 1 by more than 1e-9.
std::vector<TokenId> greedy_decode(const NextTokenScorer& scorer, const sdt::DecoupledVocabulary& vocab,
                                   std::size_t max_len = kMaxTokenLength, const DecodeContext& ctx = {});

/// greedy_decode that also keeps every step's distribution.
DecodeTrace greedy_decode_traced(const NextTokenScorer& scorer, const sdt::DecoupledVocabulary& vocab,
                                 std::size_t max_len = kMaxTokenLength, const DecodeContext& ctx = {});

struct SequenceLoss {
  double value = 0.0;     // -sum log p_t[y_t]; +inf when `infinite`
  bool infinite = false;  // some target had probability 0

  bool operator==(const SequenceLoss&) const = default;
};

/// Cross-entropy of `targets` under one distribution per target. Throws
/// Error on a count mismatch, a target outside its distribution or a
/// negative probability.
SequenceLoss sequence_loss(std::span<const std::vector<double>> probabilities, std::span<const TokenId> targets);

/// The scorer's distribution at every position of `ids` after the first.
std::vector<std::vector<double>> teacher_forced(const NextTokenScorer& scorer, std::span<const TokenId> ids,
                                                const DecodeContext& ctx = {});

}  // namespace unirec::decode
