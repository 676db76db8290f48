#include "unirec/sdt/vocabulary.hpp"

#include <algorithm>
#include <set>

#include "unirec/core/error.hpp"
#include "unirec/sdt/byte_alphabet.hpp"
#include "unirec/sdt/segment.hpp"

namespace unirec::sdt {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 2> kHierarchical{kLineBreak, kParagraphEnd};

int reserved_index(std::string_view surface) {
  for (std::size_t k = 0; k < kReservedSpecials.size(); ++k) {
    if (kReservedSpecials[k] == surface) return static_cast<int>(k);
  }
  return -1;
}

json merges_json(const BpeModel& m) {
  json out = json::array();
  for (const MergePair& p : m.merges()) out.push_back(json::array({p.left, p.right}));
  return out;
}

std::vector<MergePair> merges_from(const json& arr) {
  std::vector<MergePair> out;
  for (const json& m : arr) out.push_back({m.at(0).get<std::string>(), m.at(1).get<std::string>()});
  return out;
}

}  // namespace

DecoupledVocabulary::DecoupledVocabulary(BpeModel text, std::optional<BpeModel> formula)
    : text_model_(std::move(text)), formula_model_(std::move(formula)) {
  special_ids_.fill(0);
  std::array<bool, kReservedSpecials.size()> have{};

  for (const TokenEntry& e : text_model_.vocab()) {
    TokenEntry entry{e.id, e.surface, TokenModality::Text};
    if (const int k = reserved_index(e.surface); k >= 0) {
      entry.modality = TokenModality::Special;
      special_ids_[k] = e.id;
      have[k] = true;
    }
    index_.emplace(entry.surface, entry.id);
    entries_.push_back(std::move(entry));
  }
  for (std::size_t k = 0; k < kReservedSpecials.size(); ++k) {
    if (have[k]) continue;
    const auto id = static_cast<TokenId>(entries_.size());
    special_ids_[k] = id;
    index_.emplace(std::string(kReservedSpecials[k]), id);
    entries_.push_back({id, std::string(kReservedSpecials[k]), TokenModality::Special});
  }
  if (formula_model_) {
    for (const TokenEntry& e : formula_model_->vocab()) {
      if (text_model_.find(e.surface)) {
        excluded_.push_back(e.surface);
        continue;
      }
      if (reserved_index(e.surface) >= 0) continue;  // already in the reserved block
      const auto id = static_cast<TokenId>(entries_.size());
      index_.emplace(e.surface, id);
      entries_.push_back({id, e.surface, TokenModality::Formula});
    }
  }

  raw_.reserve(entries_.size());
  std::set<std::size_t, std::greater<>> lengths;
  for (const TokenEntry& e : entries_) {
    std::string raw = e.modality == TokenModality::Special
                          ? e.surface
                          : symbols_to_bytes(e.surface).value_or(e.surface);
    if (e.modality == TokenModality::Formula && !raw.empty()) {
      lengths.insert(raw.size());
      formula_raw_.emplace(raw, e.id);
    }
    raw_.push_back(std::move(raw));
  }
  formula_lengths_.assign(lengths.begin(), lengths.end());
}

DecoupledVocabulary DecoupledVocabulary::merge(BpeModel text, BpeModel formula) {
  return DecoupledVocabulary(std::move(text), std::move(formula));
}

DecoupledVocabulary DecoupledVocabulary::coupled(BpeModel model) {
  return DecoupledVocabulary(std::move(model), std::nullopt);
}

DecoupledVocabulary merge_decoupled(const BpeModel& text_model, const BpeModel& formula_model) {
  return DecoupledVocabulary::merge(text_model, formula_model);
}

std::vector<OverlapEntry> modality_overlap_report(const BpeModel& text_model,
                                                  const BpeModel& formula_model) {
  std::vector<OverlapEntry> out;
  for (const TokenEntry& e : formula_model.vocab()) {
    if (const auto tid = text_model.find(e.surface)) {
      out.push_back({e.surface, text_model.frequency(*tid), formula_model.frequency(e.id)});
    }
  }
  return out;
}

std::optional<TokenId> DecoupledVocabulary::find(std::string_view surface) const {
  const auto it = index_.find(std::string(surface));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void DecoupledVocabulary::encode_plain(std::string_view raw, std::vector<TokenId>& out) const {
  for (const SpecialSplit& piece : split_specials(raw, kHierarchical)) {
    if (piece.special >= 0) {
      out.push_back(special_ids_[piece.special == 0 ? 2 : 3]);
    } else {
      text_model_.encode_into(piece.text, out);
    }
  }
}

void DecoupledVocabulary::encode_formula(std::string_view raw, std::vector<TokenId>& out) const {
  for (const SpecialSplit& piece : split_specials(raw, kHierarchical)) {
    if (piece.special >= 0) {
      out.push_back(special_ids_[piece.special == 0 ? 2 : 3]);
      continue;
    }
    const std::string_view s = piece.text;
    std::size_t residue = 0;
    std::size_t pos = 0;
    while (pos < s.size()) {
      bool matched = false;
      for (std::size_t len : formula_lengths_) {
        if (pos + len > s.size()) continue;
        const auto it = formula_raw_.find(std::string(s.substr(pos, len)));
        if (it == formula_raw_.end()) continue;
        if (pos > residue) text_model_.encode_into(s.substr(residue, pos - residue), out);
        out.push_back(it->second);
        pos += len;
        residue = pos;
        matched = true;
        break;
      }
      if (!matched) ++pos;
    }
    if (residue < s.size()) text_model_.encode_into(s.substr(residue), out);
  }
}

std::vector<TokenId> DecoupledVocabulary::encode(std::string_view label) const {
  const SegmentedLabel segmented = segment_label(label);
  std::vector<TokenId> ids{bos()};
  if (!is_decoupled()) {
    encode_plain(label, ids);
  } else {
    for (const Segment& seg : segmented.segments) {
      if (seg.kind == SpanKind::Formula) {
        encode_formula(seg.content, ids);
      } else {
        encode_plain(seg.content, ids);
      }
    }
  }
  ids.push_back(eos());
  return ids;
}

std::string DecoupledVocabulary::decode(std::span<const TokenId> ids) const {
  std::string out;
  for (std::size_t p = 0; p < ids.size(); ++p) {
    const TokenId id = ids[p];
    if (id >= entries_.size()) {
      throw PositionError("token id " + std::to_string(id) + " out of range for vocabulary of " +
                              std::to_string(entries_.size()),
                          p);
    }
    if (id == bos() || id == eos() || id == pad()) continue;
    out += raw_[id];
  }
  return out;
}

json DecoupledVocabulary::to_json() const {
  json tokens = json::array();
  for (const TokenEntry& e : entries_) {
    tokens.push_back({{"id", e.id}, {"surface", e.surface}, {"modality", tag_name(e.modality)}});
  }
  json j{{"kind", is_decoupled() ? "sdt" : "coupled"}, {"version", 1}, {"text_size", text_size()}};
  j["tokens"] = std::move(tokens);
  j["merges"] = merges_json(text_model_);
  j["excluded"] = excluded_;
  if (!text_model_.is_byte_level()) {
    j["text_alphabet"] = text_model_.alphabet();
  }
  if (formula_model_) {
    j["formula_merges"] = merges_json(*formula_model_);
    if (!formula_model_->is_byte_level()) {
      j["formula_alphabet"] = formula_model_->alphabet();
      json surfaces = json::array();
      for (const TokenEntry& e : formula_model_->vocab()) surfaces.push_back(e.surface);
      j["formula_surfaces"] = std::move(surfaces);
    }
  }
  return j;
}

DecoupledVocabulary DecoupledVocabulary::from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind != "sdt" && kind != "coupled") throw Error("not a vocabulary file (kind '" + kind + "')");
    const json& tokens = j.at("tokens");
    const auto text_size = j.at("text_size").get<std::size_t>();
    if (text_size > tokens.size()) throw Error("text_size exceeds token count");

    std::vector<std::string> text_surfaces;
    for (std::size_t i = 0; i < text_size; ++i) text_surfaces.push_back(tokens[i].at("surface").get<std::string>());
    std::vector<std::string> text_alphabet;
    if (j.contains("text_alphabet")) {
      text_alphabet = j["text_alphabet"].get<std::vector<std::string>>();
    } else {
      const auto& sym = byte_symbols();
      text_alphabet.assign(sym.begin(), sym.end());
    }
    BpeModel text(TokenModality::Text, std::move(text_alphabet), merges_from(j.at("merges")),
                  std::move(text_surfaces));

    std::optional<DecoupledVocabulary> vocab;
    if (kind == "coupled") {
      vocab.emplace(DecoupledVocabulary::coupled(std::move(text)));
    } else if (j.contains("formula_surfaces")) {
      BpeModel formula(TokenModality::Formula, j.at("formula_alphabet").get<std::vector<std::string>>(),
                       merges_from(j.at("formula_merges")),
                       j.at("formula_surfaces").get<std::vector<std::string>>());
      vocab.emplace(DecoupledVocabulary::merge(std::move(text), std::move(formula)));
    } else {
      vocab.emplace(DecoupledVocabulary::merge(
          std::move(text), BpeModel::byte_level(TokenModality::Formula, merges_from(j.at("formula_merges")))));
    }

    if (vocab->entries_.size() != tokens.size()) throw Error("token table does not match its models");
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const TokenEntry& e = vocab->entries_[i];
      const json& t = tokens[i];
      if (t.at("id").get<std::size_t>() != i || t.at("surface").get<std::string>() != e.surface ||
          t.at("modality").get<std::string>() != tag_name(e.modality)) {
        throw Error("token " + std::to_string(i) + " does not match its models");
      }
    }
    if (j.contains("excluded") && j["excluded"].get<std::vector<std::string>>() != vocab->excluded_) {
      throw Error("excluded list does not match its models");
    }
    return std::move(*vocab);
  } catch (const json::exception& e) {
    throw Error(std::string("vocabulary json: ") + e.what());
  }
}

}  // namespace unirec::sdt
