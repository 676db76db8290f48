#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "unirec/core/tags.hpp"
#include "unirec/corpus/generator.hpp"
#include "unirec/hst/document.hpp"
#include "unirec/sdt/vocabulary.hpp"

namespace unirec::corpus {

// One training sample: `label` without supervision tokens, `hst_label` with
// them (identical below the paragraph level).
struct SampleRecord {
  std::string id;
  std::string label;
  std::string hst_label;
  SampleTags tags;

  bool operator==(const SampleRecord&) const = default;
};

nlohmann::json to_json(const SampleRecord& record);
SampleRecord sample_from_json(const nlohmann::json& j);

std::vector<SampleRecord> read_samples(std::string_view jsonl);

/// Documents of seeds mix_seed(seed, 0..n-1).
std::vector<hst::StructuredDocument> generate_corpus(std::uint64_t seed, std::size_t n,
                                                     const GeneratorProfile& profile);

/// Text if the label has no formula, Formula if it has nothing but formulas
/// and whitespace, Mix otherwise.
Modality classify_label(std::string_view label);

/// CH if the non-formula text has Han characters only, EN if Latin letters
/// only, Mix if both, `fallback` if neither.
Language classify_language(std::string_view label, Language fallback);

/// Samples of every requested level cut from every document. Ids are
/// "d<doc>-<level>-<k>"; the domain comes from the document, and so does the
/// language unless the document is Mix, in which case each sample is
/// classified by `classify_language`.
std::vector<SampleRecord> make_samples(std::span<const hst::StructuredDocument> docs,
                                       std::span<const HierLevel> levels, std::uint64_t seed);

enum class LabelField { Hst, Plain };

struct FilterResult {
  std::vector<SampleRecord> kept;
  std::vector<SampleRecord> dropped;
  // "modality/text", "level/line", "language/EN", "domain/book", ...
  std::map<std::string, std::size_t> dropped_by_tag;
};

/// Keeps samples whose encoding, <BOS> and <EOS> included, has at most
/// `max_len` ids. Order is preserved in both lists.
FilterResult length_filter(const sdt::DecoupledVocabulary& vocab, std::span<const SampleRecord> samples,
                           std::size_t max_len = 1024, LabelField field = LabelField::Hst);

nlohmann::json filter_summary(const FilterResult& result, std::size_t max_len);

}  // namespace unirec::corpus
