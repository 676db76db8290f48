#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "unirec/sdt/bpe.hpp"
#include "unirec/sdt/specials.hpp"

namespace unirec::sdt {

struct OverlapEntry {
  std::string surface;
  std::uint64_t text_frequency = 0;
  std::uint64_t formula_frequency = 0;

  bool operator==(const OverlapEntry&) const = default;
};

// The merged token table. Layout:
//   [0, text_size)        text model, ids preserved
//   reserved specials     <BOS> <EOS> <|ln|> <|pn|> <PAD>, unless already present
//   formula-origin block  formula surfaces absent from the text model and the
//                         reserved set, in formula-model id order
// Formula-origin tokens are atomic: they never take part in BPE merges and
// are only reachable from Formula segments.
//
// A "coupled" vocabulary has no formula block and encodes the label without
// modality routing; it is the single-tokenizer baseline.
//
// Immutable once built; encode and decode are safe to call concurrently.
class DecoupledVocabulary {
 public:
  static DecoupledVocabulary merge(BpeModel text, BpeModel formula);
  static DecoupledVocabulary coupled(BpeModel model);

  bool is_decoupled() const noexcept { return formula_model_.has_value(); }
  const BpeModel& text_model() const noexcept { return text_model_; }
  const BpeModel* formula_model() const noexcept {
    return formula_model_ ? &*formula_model_ : nullptr;
  }

  const std::vector<TokenEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t text_size() const noexcept { return text_model_.size(); }

  /// Formula surfaces dropped because the text model already has them.
  const std::vector<std::string>& excluded() const noexcept { return excluded_; }

  std::optional<TokenId> find(std::string_view surface) const;

  TokenId bos() const noexcept { return special_ids_[0]; }
  TokenId eos() const noexcept { return special_ids_[1]; }
  TokenId line_break() const noexcept { return special_ids_[2]; }
  TokenId paragraph_end() const noexcept { return special_ids_[3]; }
  TokenId pad() const noexcept { return special_ids_[4]; }

  /// <BOS>, the label, <EOS>. Text segments go through the text model's
  /// merges; Formula segments take the longest formula-origin surface at
  /// each position and fall back to the text model for the bytes between
  /// matches. <|ln|> and <|pn|> always map to their single ids.
  /// Throws ParseError if the label cannot be segmented.
  std::vector<TokenId> encode(std::string_view label) const;

  /// Concatenated surfaces without <BOS>/<EOS>/<PAD>; <|ln|> and <|pn|> are
  /// kept literally. Throws PositionError on an id outside the vocabulary.
  std::string decode(std::span<const TokenId> ids) const;

  nlohmann::json to_json() const;
  static DecoupledVocabulary from_json(const nlohmann::json& j);

 private:
  DecoupledVocabulary(BpeModel text, std::optional<BpeModel> formula);

  void encode_plain(std::string_view raw, std::vector<TokenId>& out) const;
  void encode_formula(std::string_view raw, std::vector<TokenId>& out) const;

  BpeModel text_model_;
  std::optional<BpeModel> formula_model_;
  std::vector<TokenEntry> entries_;
  std::vector<std::string> excluded_;
  std::vector<std::string> raw_;  // decoded bytes of each entry
  std::unordered_map<std::string, TokenId> index_;
  std::unordered_map<std::string, TokenId> formula_raw_;
  std::vector<std::size_t> formula_lengths_;  // distinct raw lengths, descending
  std::array<TokenId, kReservedSpecials.size()> special_ids_{};
};

DecoupledVocabulary merge_decoupled(const BpeModel& text_model, const BpeModel& formula_model);

/// Surfaces present in both models, in formula-model id order, with each
/// model's training frequency. Same surfaces as `merge_decoupled(...).excluded()`.
std::vector<OverlapEntry> modality_overlap_report(const BpeModel& text_model,
                                                  const BpeModel& formula_model);

}  // namespace unirec::sdt
