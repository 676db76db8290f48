#include "unirec/corpus/samples.hpp"

#include <cstdio>

#include "unirec/core/error.hpp"
#include "unirec/core/io.hpp"
#include "unirec/core/rng.hpp"
#include "unirec/core/utf8.hpp"
#include "unirec/hst/codec.hpp"
#include "unirec/sdt/segment.hpp"

namespace unirec::corpus {

using nlohmann::json;

namespace {

std::string padded(std::size_t v, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*zu", width, v);
  return buf;
}

bool has_visible_text(std::string_view s) {
  const std::string stripped = hst::strip_hst(s);
  for (char32_t c : utf8::decode(stripped)) {
    if (!utf8::is_space(c)) return true;
  }
  return false;
}

}  // namespace

json to_json(const SampleRecord& r) {
  return {{"id", r.id}, {"label", r.label}, {"hst_label", r.hst_label}, {"tags", to_json(r.tags)}};
}

SampleRecord sample_from_json(const json& j) {
  if (!j.is_object()) throw Error("sample is not an object");
  SampleRecord r;
  for (const char* key : {"id", "label", "hst_label"}) {
    if (!j.contains(key) || !j.at(key).is_string()) throw Error(std::string("sample: missing string '") + key + "'");
  }
  r.id = j.at("id").get<std::string>();
  r.label = j.at("label").get<std::string>();
  r.hst_label = j.at("hst_label").get<std::string>();
  if (!j.contains("tags")) throw Error("sample '" + r.id + "': missing tags");
  try {
    r.tags = tags_from_json(j.at("tags"));
  } catch (const Error& e) {
    throw Error("sample '" + r.id + "': " + e.what());
  }
  return r;
}

std::vector<SampleRecord> read_samples(std::string_view jsonl) {
  std::vector<SampleRecord> out;
  for (const json& j : io::parse_jsonl(jsonl)) out.push_back(sample_from_json(j));
  return out;
}

std::vector<hst::StructuredDocument> generate_corpus(std::uint64_t seed, std::size_t n,
                                                     const GeneratorProfile& profile) {
  validate(profile);
  std::vector<hst::StructuredDocument> docs;
  docs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) docs.push_back(generate_document(mix_seed(seed, i), profile));
  return docs;
}

Modality classify_label(std::string_view label) {
  const std::string plain = hst::strip_hst(label);
  const sdt::SegmentedLabel seg = sdt::segment_label(plain);
  bool text = false;
  bool formula = false;
  for (const sdt::Segment& s : seg.segments) {
    if (s.kind == SpanKind::Formula) {
      formula = true;
    } else if (has_visible_text(s.content)) {
      text = true;
    }
  }
  if (formula && text) return Modality::Mix;
  return formula ? Modality::Formula : Modality::Text;
}

Language classify_language(std::string_view label, Language fallback) {
  bool han = false;
  bool latin = false;
  for (const sdt::Segment& seg : sdt::segment_label(hst::strip_hst(label)).segments) {
    if (seg.kind == SpanKind::Formula) continue;
    for (char32_t c : utf8::decode(seg.content)) {
      han = han || (c >= 0x3400 && c <= 0x9FFF) || (c >= 0xF900 && c <= 0xFAFF);
      latin = latin || (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
    }
  }
  if (han && latin) return Language::Mix;
  if (han) return Language::CH;
  if (latin) return Language::EN;
  return fallback;
}

std::vector<SampleRecord> make_samples(std::span<const hst::StructuredDocument> docs,
                                       std::span<const HierLevel> levels, std::uint64_t seed) {
  std::vector<SampleRecord> out;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (HierLevel level : levels) {
      const auto samples = hst::derive_levels(docs[d], level, mix_seed(seed, d));
      for (std::size_t k = 0; k < samples.size(); ++k) {
        SampleRecord r;
        r.id = "d" + padded(d, 5) + "-" + std::string(tag_name(level)) + "-" + padded(k, 3);
        r.hst_label = samples[k].label;
        r.label = hst::strip_hst(samples[k].label);
        const Language language =
            docs[d].language == Language::Mix ? classify_language(r.label, Language::Mix) : docs[d].language;
        r.tags = {classify_label(r.label), level, language, docs[d].domain};
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

FilterResult length_filter(const sdt::DecoupledVocabulary& vocab, std::span<const SampleRecord> samples,
                           std::size_t max_len, LabelField field) {
  FilterResult result;
  for (const SampleRecord& r : samples) {
    const std::string& label = field == LabelField::Hst ? r.hst_label : r.label;
    if (vocab.encode(label).size() <= max_len) {
      result.kept.push_back(r);
      continue;
    }
    ++result.dropped_by_tag["modality/" + std::string(tag_name(r.tags.modality))];
    ++result.dropped_by_tag["level/" + std::string(tag_name(r.tags.level))];
    ++result.dropped_by_tag["language/" + std::string(tag_name(r.tags.language))];
    ++result.dropped_by_tag["domain/" + std::string(tag_name(r.tags.domain))];
    result.dropped.push_back(r);
  }
  return result;
}

json filter_summary(const FilterResult& result, std::size_t max_len) {
  json by_tag = json::object();
  for (const auto& [tag, n] : result.dropped_by_tag) by_tag[tag] = n;
  return {{"max_len", max_len},
          {"kept", result.kept.size()},
          {"dropped", result.dropped.size()},
          {"dropped_by_tag", std::move(by_tag)}};
}

}  // namespace unirec::corpus
