#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace unirec::sdt {

using TokenId = std::uint32_t;

enum class TokenModality { Text, Formula, Special };

std::string_view tag_name(TokenModality m) noexcept;
std::optional<TokenModality> parse_token_modality(std::string_view s);

struct TokenEntry {
  TokenId id = 0;
  std::string surface;
  TokenModality modality = TokenModality::Text;

  bool operator==(const TokenEntry&) const = default;
};

struct MergePair {
  std::string left;
  std::string right;

  bool operator==(const MergePair&) const = default;
};

// A single-modality BPE tokenizer. Vocabulary ids are dense and surfaces
// unique; every merge's operands and output are in the vocabulary. Models
// built on the byte alphabet can encode arbitrary bytes, others only carry a
// vocabulary (they still merge and compare).
class BpeModel {
 public:
  BpeModel(TokenModality modality, std::vector<std::string> alphabet, std::vector<MergePair> merges,
           std::vector<std::string> surfaces, std::vector<std::uint64_t> frequencies = {});

  /// Byte alphabet (ids 0..255 in byte order) followed by the distinct merge
  /// outputs in rank order.
  static BpeModel byte_level(TokenModality modality, std::vector<MergePair> merges,
                             std::vector<std::uint64_t> frequencies = {});

  TokenModality modality() const noexcept { return modality_; }
  bool is_byte_level() const noexcept { return byte_level_; }
  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
  const std::vector<MergePair>& merges() const noexcept { return merges_; }
  const std::vector<TokenEntry>& vocab() const noexcept { return vocab_; }
  std::size_t size() const noexcept { return vocab_.size(); }

  std::optional<TokenId> find(std::string_view surface) const;

  /// Occurrences of the token in the segmented training corpus (0 if unknown).
  std::uint64_t frequency(TokenId id) const noexcept;

  /// Pre-tokenizes raw bytes and applies merges in rank order within each
  /// chunk. Requires a byte-level model.
  std::vector<TokenId> encode(std::string_view raw) const;
  void encode_into(std::string_view raw, std::vector<TokenId>& out) const;

  nlohmann::json to_json() const;
  static BpeModel from_json(const nlohmann::json& j);

 private:
  struct PairHash {
    std::size_t operator()(std::uint64_t k) const noexcept { return std::hash<std::uint64_t>{}(k); }
  };
  struct Rule {
    std::uint32_t rank;
    TokenId output;
  };

  static std::uint64_t pair_key(TokenId l, TokenId r) noexcept {
    return (static_cast<std::uint64_t>(l) << 32) | r;
  }
  void encode_chunk(std::string_view chunk, std::vector<TokenId>& out) const;

  TokenModality modality_;
  bool byte_level_ = false;
  std::vector<std::string> alphabet_;
  std::vector<MergePair> merges_;
  std::vector<TokenEntry> vocab_;
  std::vector<std::uint64_t> frequencies_;
  std::unordered_map<std::string, TokenId> index_;
  std::unordered_map<std::uint64_t, Rule, PairHash> rules_;
  std::array<TokenId, 256> byte_ids_{};
};

/// Trains a byte-level BPE model. Each step merges the most frequent
/// adjacent pair (ties: lexicographically smallest concatenated surface,
/// then smallest left surface) while it occurs at least twice and the
/// vocabulary is below `target_vocab_size`. Reserved special surfaces are
/// cut out of the corpus before counting.
BpeModel train_bpe(std::span<const std::string> corpus, std::size_t target_vocab_size,
                   TokenModality modality);

}  // namespace unirec::sdt
