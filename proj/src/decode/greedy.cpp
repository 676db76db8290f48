#include "unirec/decode/greedy.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "unirec/core/error.hpp"
#include "unirec/simd/kernels.hpp"

namespace unirec::decode {
namespace {

// Validates one scorer output and returns its argmax.
std::size_t checked_argmax(std::span<const double> p, std::size_t step) {
  const simd::ProbStats st = simd::prob_stats(p);
  const std::string where = "scorer output at step " + std::to_string(step);
  if (!st.finite) throw Error(where + " has a non-finite entry");
  if (st.min < 0.0) throw Error(where + " has a negative entry");
  if (std::fabs(st.sum - 1.0) > kProbabilityTolerance) {
    throw Error(where + " sums to " + std::to_string(st.sum) + ", not 1");
  }
  return st.argmax;
}

template <class OnStep>
std::vector<TokenId> run(const NextTokenScorer& scorer, const sdt::DecoupledVocabulary& vocab, std::size_t max_len,
                         const DecodeContext& ctx, OnStep on_step) {
  if (max_len < 1) throw Error("max_len must be at least 1");
  const std::size_t v = vocab.size();
  if (scorer.vocab_size() != v) {
    throw Error("scorer covers " + std::to_string(scorer.vocab_size()) + " tokens, vocabulary has " +
                std::to_string(v));
  }
  std::vector<TokenId> seq{vocab.bos()};
  std::vector<double> probs;
  while (seq.size() < max_len) {
    const std::size_t step = seq.size() - 1;
    scorer.score(seq, ctx, probs);
    if (probs.size() != v) {
      throw Error("scorer output at step " + std::to_string(step) + " has " + std::to_string(probs.size()) +
                  " entries, expected " + std::to_string(v));
    }
    const auto next = static_cast<TokenId>(checked_argmax(probs, step));
    on_step(probs);
    seq.push_back(next);
    if (next == vocab.eos()) break;
  }
  return seq;
}

}  // namespace

std::vector<TokenId> greedy_decode(const NextTokenScorer& scorer, const sdt::DecoupledVocabulary& vocab,
                                   std::size_t max_len, const DecodeContext& ctx) {
  return run(scorer, vocab, max_len, ctx, [](const std::vector<double>&) {});
}

DecodeTrace greedy_decode_traced(const NextTokenScorer& scorer, const sdt::DecoupledVocabulary& vocab,
                                 std::size_t max_len, const DecodeContext& ctx) {
  DecodeTrace trace;
  trace.ids = run(scorer, vocab, max_len, ctx, [&](const std::vector<double>& p) { trace.steps.push_back(p); });
  return trace;
}

SequenceLoss sequence_loss(std::span<const std::vector<double>> probabilities, std::span<const TokenId> targets) {
  if (probabilities.size() != targets.size()) {
    throw Error("sequence_loss: " + std::to_string(probabilities.size()) + " distributions for " +
                std::to_string(targets.size()) + " targets");
  }
  SequenceLoss loss;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const auto& p = probabilities[t];
    if (targets[t] >= p.size()) throw Error("sequence_loss: target at step " + std::to_string(t) + " out of range");
    const double pt = p[targets[t]];
    if (pt < 0.0 || std::isnan(pt)) throw Error("sequence_loss: invalid probability at step " + std::to_string(t));
    if (pt == 0.0) {
      loss.infinite = true;
      continue;
    }
    loss.value -= std::log(pt);
  }
  if (loss.infinite) loss.value = std::numeric_limits<double>::infinity();
  return loss;
}

std::vector<std::vector<double>> teacher_forced(const NextTokenScorer& scorer, std::span<const TokenId> ids,
                                                const DecodeContext& ctx) {
  std::vector<std::vector<double>> out;
  for (std::size_t t = 1; t < ids.size(); ++t) {
    std::vector<double> p;
    scorer.score(ids.first(t), ctx, p);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace unirec::decode
