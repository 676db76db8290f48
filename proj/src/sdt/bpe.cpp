#include "unirec/sdt/bpe.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "unirec/core/error.hpp"
#include "unirec/sdt/byte_alphabet.hpp"
#include "unirec/sdt/pretokenize.hpp"
#include "unirec/sdt/specials.hpp"

namespace unirec::sdt {

using nlohmann::json;

std::string_view tag_name(TokenModality m) noexcept {
  switch (m) {
    case TokenModality::Text: return "text";
    case TokenModality::Formula: return "formula";
    case TokenModality::Special: return "special";
  }
  return "?";
}

std::optional<TokenModality> parse_token_modality(std::string_view s) {
  if (s == "text") return TokenModality::Text;
  if (s == "formula") return TokenModality::Formula;
  if (s == "special") return TokenModality::Special;
  return std::nullopt;
}

namespace {

std::vector<std::string> byte_alphabet() {
  const auto& sym = byte_symbols();
  return {sym.begin(), sym.end()};
}

}  // namespace

BpeModel::BpeModel(TokenModality modality, std::vector<std::string> alphabet,
                   std::vector<MergePair> merges, std::vector<std::string> surfaces,
                   std::vector<std::uint64_t> frequencies)
    : modality_(modality),
      alphabet_(std::move(alphabet)),
      merges_(std::move(merges)),
      frequencies_(std::move(frequencies)) {
  if (!frequencies_.empty() && frequencies_.size() != surfaces.size()) {
    throw Error("bpe model: frequency table does not match vocabulary size");
  }
  vocab_.reserve(surfaces.size());
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    const auto id = static_cast<TokenId>(i);
    if (!index_.emplace(surfaces[i], id).second) {
      throw Error("bpe model: duplicate surface '" + surfaces[i] + "'");
    }
    vocab_.push_back({id, std::move(surfaces[i]), modality});
  }
  for (const std::string& a : alphabet_) {
    if (!index_.contains(a)) throw Error("bpe model: alphabet symbol '" + a + "' not in vocabulary");
  }
  for (std::size_t r = 0; r < merges_.size(); ++r) {
    const MergePair& m = merges_[r];
    const auto l = find(m.left);
    const auto rt = find(m.right);
    const auto out = find(m.left + m.right);
    if (!l || !rt || !out) {
      throw Error("bpe model: merge " + std::to_string(r) + " ('" + m.left + "', '" + m.right +
                  "') references a surface outside the vocabulary");
    }
    // A repeated pair keeps its first (lowest) rank.
    rules_.emplace(pair_key(*l, *rt), Rule{static_cast<std::uint32_t>(r), *out});
  }
  byte_level_ = alphabet_ == byte_alphabet();
  if (byte_level_) {
    const auto& sym = byte_symbols();
    for (int b = 0; b < 256; ++b) byte_ids_[b] = index_.at(sym[b]);
  }
}

BpeModel BpeModel::byte_level(TokenModality modality, std::vector<MergePair> merges,
                              std::vector<std::uint64_t> frequencies) {
  std::vector<std::string> surfaces = byte_alphabet();
  std::unordered_map<std::string, bool> seen;
  for (const auto& s : surfaces) seen.emplace(s, true);
  for (const MergePair& m : merges) {
    std::string out = m.left + m.right;
    if (seen.emplace(out, true).second) surfaces.push_back(std::move(out));
  }
  return BpeModel(modality, byte_alphabet(), std::move(merges), std::move(surfaces),
                  std::move(frequencies));
}

std::optional<TokenId> BpeModel::find(std::string_view surface) const {
  const auto it = index_.find(std::string(surface));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t BpeModel::frequency(TokenId id) const noexcept {
  return id < frequencies_.size() ? frequencies_[id] : 0;
}

void BpeModel::encode_chunk(std::string_view chunk, std::vector<TokenId>& out) const {
  std::vector<TokenId> syms;
  syms.reserve(chunk.size());
  for (char c : chunk) syms.push_back(byte_ids_[static_cast<unsigned char>(c)]);

  while (syms.size() > 1) {
    std::uint32_t best_rank = std::numeric_limits<std::uint32_t>::max();
    std::uint64_t best_key = 0;
    TokenId best_out = 0;
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
      const auto it = rules_.find(pair_key(syms[i], syms[i + 1]));
      if (it != rules_.end() && it->second.rank < best_rank) {
        best_rank = it->second.rank;
        best_key = it->first;
        best_out = it->second.output;
      }
    }
    if (best_rank == std::numeric_limits<std::uint32_t>::max()) break;
    std::size_t w = 0;
    for (std::size_t i = 0; i < syms.size();) {
      if (i + 1 < syms.size() && pair_key(syms[i], syms[i + 1]) == best_key) {
        syms[w++] = best_out;
        i += 2;
      } else {
        syms[w++] = syms[i++];
      }
    }
    syms.resize(w);
  }
  out.insert(out.end(), syms.begin(), syms.end());
}

void BpeModel::encode_into(std::string_view raw, std::vector<TokenId>& out) const {
  if (!byte_level_) throw Error("internal error: encoding requires a byte-level model");
  for (std::string_view chunk : pretokenize(raw)) encode_chunk(chunk, out);
}

std::vector<TokenId> BpeModel::encode(std::string_view raw) const {
  std::vector<TokenId> out;
  encode_into(raw, out);
  return out;
}

json BpeModel::to_json() const {
  json tokens = json::array();
  for (const TokenEntry& e : vocab_) {
    json t{{"id", e.id}, {"surface", e.surface}, {"modality", tag_name(e.modality)}};
    if (!frequencies_.empty()) t["freq"] = frequencies_[e.id];
    tokens.push_back(std::move(t));
  }
  json merges = json::array();
  for (const MergePair& m : merges_) merges.push_back(json::array({m.left, m.right}));
  json j{{"kind", "bpe"}, {"version", 1}, {"modality", tag_name(modality_)}};
  j["alphabet"] = byte_level_ ? json("bytes") : json(alphabet_);
  j["tokens"] = std::move(tokens);
  j["merges"] = std::move(merges);
  return j;
}

BpeModel BpeModel::from_json(const json& j) {
  try {
    if (j.value("kind", "") != "bpe") throw Error("not a bpe model");
    const auto modality = parse_token_modality(j.at("modality").get<std::string>());
    if (!modality) throw Error("unknown modality");
    std::vector<std::string> alphabet;
    if (j.at("alphabet").is_string()) {
      if (j.at("alphabet").get<std::string>() != "bytes") throw Error("unknown alphabet");
      alphabet = byte_alphabet();
    } else {
      alphabet = j.at("alphabet").get<std::vector<std::string>>();
    }
    std::vector<MergePair> merges;
    for (const json& m : j.at("merges")) {
      merges.push_back({m.at(0).get<std::string>(), m.at(1).get<std::string>()});
    }
    std::vector<std::string> surfaces;
    std::vector<std::uint64_t> freq;
    const json& tokens = j.at("tokens");
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const json& t = tokens[i];
      if (t.at("id").get<std::size_t>() != i) throw Error("token ids are not dense");
      surfaces.push_back(t.at("surface").get<std::string>());
      if (t.contains("freq")) freq.push_back(t["freq"].get<std::uint64_t>());
    }
    if (!freq.empty() && freq.size() != surfaces.size()) throw Error("partial frequency table");
    return BpeModel(*modality, std::move(alphabet), std::move(merges), std::move(surfaces),
                    std::move(freq));
  } catch (const json::exception& e) {
    throw Error(std::string("bpe model json: ") + e.what());
  }
}

namespace {

struct Word {
  std::vector<TokenId> syms;
  std::uint64_t count;
};

}  // namespace

BpeModel train_bpe(std::span<const std::string> corpus, std::size_t target_vocab_size,
                   TokenModality modality) {
  if (corpus.empty()) throw Error("empty corpus");
  if (target_vocab_size < 256) throw Error("vocab too small");

  // Chunk frequencies; std::map keeps the word order independent of hashing.
  std::map<std::string, std::uint64_t, std::less<>> chunk_counts;
  for (const std::string& line : corpus) {
    for (const SpecialSplit& piece : split_specials(line, kReservedSpecials)) {
      if (piece.special >= 0) continue;
      for (std::string_view chunk : pretokenize(piece.text)) ++chunk_counts[std::string(chunk)];
    }
  }

  std::vector<std::string> surfaces = byte_alphabet();
  std::unordered_map<std::string, TokenId> index;
  for (std::size_t i = 0; i < surfaces.size(); ++i) index.emplace(surfaces[i], static_cast<TokenId>(i));

  std::vector<Word> words;
  words.reserve(chunk_counts.size());
  for (const auto& [chunk, count] : chunk_counts) {
    Word w{{}, count};
    for (char c : chunk) w.syms.push_back(static_cast<unsigned char>(c));
    words.push_back(std::move(w));
  }

  std::vector<MergePair> merges;
  std::unordered_map<std::uint64_t, std::uint64_t> pair_counts;
  while (surfaces.size() < target_vocab_size) {
    pair_counts.clear();
    for (const Word& w : words) {
      for (std::size_t i = 0; i + 1 < w.syms.size(); ++i) {
        pair_counts[(static_cast<std::uint64_t>(w.syms[i]) << 32) | w.syms[i + 1]] += w.count;
      }
    }

    std::uint64_t best_count = 0;
    std::uint64_t best_key = 0;
    std::string best_concat;
    for (const auto& [key, count] : pair_counts) {
      if (count < best_count || count < 2) continue;
      const auto l = static_cast<TokenId>(key >> 32);
      const auto r = static_cast<TokenId>(key & 0xFFFFFFFFu);
      std::string concat = surfaces[l] + surfaces[r];
      bool better = count > best_count;
      if (!better) {
        const int cmp = concat.compare(best_concat);
        better = cmp < 0 || (cmp == 0 && surfaces[l] < surfaces[best_key >> 32]);
      }
      if (better) {
        best_count = count;
        best_key = key;
        best_concat = std::move(concat);
      }
    }
    if (best_count < 2) break;

    const auto l = static_cast<TokenId>(best_key >> 32);
    const auto r = static_cast<TokenId>(best_key & 0xFFFFFFFFu);
    merges.push_back({surfaces[l], surfaces[r]});
    TokenId out;
    if (const auto it = index.find(best_concat); it != index.end()) {
      out = it->second;
    } else {
      out = static_cast<TokenId>(surfaces.size());
      index.emplace(best_concat, out);
      surfaces.push_back(best_concat);
    }

    for (Word& w : words) {
      std::size_t dst = 0;
      for (std::size_t i = 0; i < w.syms.size();) {
        if (i + 1 < w.syms.size() && w.syms[i] == l && w.syms[i + 1] == r) {
          w.syms[dst++] = out;
          i += 2;
        } else {
          w.syms[dst++] = w.syms[i++];
        }
      }
      w.syms.resize(dst);
    }
  }

  std::vector<std::uint64_t> freq(surfaces.size(), 0);
  for (const Word& w : words) {
    for (TokenId id : w.syms) freq[id] += w.count;
  }
  return BpeModel::byte_level(modality, std::move(merges), std::move(freq));
}

}  // namespace unirec::sdt
