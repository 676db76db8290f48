#include "unirec/decode/scorer.hpp"

#include <algorithm>
#include <string>

#include "unirec/core/error.hpp"
#include "unirec/core/rng.hpp"

namespace unirec::decode {

using nlohmann::json;

NgramScorer::NgramScorer(std::size_t vocab_size, std::size_t order, double alpha)
    : vocab_size_(vocab_size), order_(order), alpha_(alpha) {
  if (vocab_size == 0) throw Error("ngram scorer needs a non-empty vocabulary");
  if (order < 1) throw Error("ngram order must be >= 1");
  if (!(alpha > 0.0)) throw Error("ngram smoothing must be positive");
}

void NgramScorer::fit(std::span<const std::vector<TokenId>> sequences) {
  for (const auto& seq : sequences) {
    for (std::size_t t = 1; t < seq.size(); ++t) {
      if (seq[t] >= vocab_size_) throw Error("ngram training id " + std::to_string(seq[t]) + " out of range");
      const std::size_t start = t >= order_ - 1 ? t - (order_ - 1) : 0;
      Counts& c = table_[std::vector<TokenId>(seq.begin() + static_cast<std::ptrdiff_t>(start),
                                              seq.begin() + static_cast<std::ptrdiff_t>(t))];
      ++c.next[seq[t]];
      ++c.total;
    }
  }
}

void NgramScorer::score(std::span<const TokenId> prefix, const DecodeContext&, std::vector<double>& out) const {
  out.resize(vocab_size_);
  const std::size_t start = prefix.size() >= order_ - 1 ? prefix.size() - (order_ - 1) : 0;
  const std::vector<TokenId> key(prefix.begin() + static_cast<std::ptrdiff_t>(start), prefix.end());
  const auto it = table_.find(key);
  const double v = static_cast<double>(vocab_size_);
  if (it == table_.end()) {
    std::fill(out.begin(), out.end(), 1.0 / v);
    return;
  }
  const double denom = static_cast<double>(it->second.total) + alpha_ * v;
  std::fill(out.begin(), out.end(), alpha_ / denom);
  for (const auto& [id, n] : it->second.next) out[id] = (static_cast<double>(n) + alpha_) / denom;
}

json NgramScorer::to_json() const {
  json contexts = json::array();
  for (const auto& [ctx, counts] : table_) {
    json next = json::array();
    for (const auto& [id, n] : counts.next) next.push_back({id, n});
    contexts.push_back({{"context", ctx}, {"next", std::move(next)}});
  }
  return {{"kind", "ngram"},
          {"version", 1},
          {"order", order_},
          {"vocab_size", vocab_size_},
          {"alpha", alpha_},
          {"contexts", std::move(contexts)}};
}

NgramScorer NgramScorer::from_json(const json& j) {
  try {
    if (j.at("kind") != "ngram") throw Error("not an ngram scorer");
    if (j.at("version").get<int>() != 1) throw Error("unsupported ngram scorer version");
    NgramScorer s(j.at("vocab_size").get<std::size_t>(), j.at("order").get<std::size_t>(),
                  j.at("alpha").get<double>());
    for (const json& c : j.at("contexts")) {
      const auto ctx = c.at("context").get<std::vector<TokenId>>();
      if (ctx.size() > s.order_ - 1) throw Error("ngram context longer than the order allows");
      Counts& counts = s.table_[ctx];
      for (const json& n : c.at("next")) {
        const auto id = n.at(0).get<TokenId>();
        if (id >= s.vocab_size_) throw Error("ngram id " + std::to_string(id) + " out of range");
        const auto count = n.at(1).get<std::uint64_t>();
        counts.next[id] += count;
        counts.total += count;
      }
    }
    return s;
  } catch (const json::exception& e) {
    throw Error(std::string("ngram scorer json: ") + e.what());
  }
}

OracleScorer::OracleScorer(std::size_t vocab_size, std::vector<TokenId> target, TokenId eos, double error_rate,
                           std::uint64_t seed, double confidence)
    : vocab_size_(vocab_size),
      target_(std::move(target)),
      eos_(eos),
      error_rate_(error_rate),
      seed_(seed),
      confidence_(confidence) {
  if (vocab_size < 2) throw Error("oracle scorer needs at least two tokens");
  if (!(error_rate >= 0.0 && error_rate <= 1.0)) throw Error("oracle error rate must lie in [0, 1]");
  if (!(confidence > 1.0 / static_cast<double>(vocab_size) && confidence <= 1.0)) {
    throw Error("oracle confidence must beat the uniform share");
  }
  if (eos >= vocab_size) throw Error("oracle <EOS> id out of range");
  for (TokenId id : target_) {
    if (id >= vocab_size) throw Error("oracle target id " + std::to_string(id) + " out of range");
  }
}

void OracleScorer::score(std::span<const TokenId> prefix, const DecodeContext&, std::vector<double>& out) const {
  out.resize(vocab_size_);
  const std::size_t t = prefix.size();
  TokenId peak = t < target_.size() ? target_[t] : eos_;
  Rng rng(mix_seed(seed_, t));
  if (rng.bernoulli(error_rate_)) {
    peak = static_cast<TokenId>((peak + 1 + rng.below(vocab_size_ - 1)) % vocab_size_);
  }
  std::fill(out.begin(), out.end(), (1.0 - confidence_) / static_cast<double>(vocab_size_ - 1));
  out[peak] = confidence_;
}

}  // namespace unirec::decode
